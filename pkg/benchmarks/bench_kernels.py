#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs every hot kernel under both backends and prints a timing table.
The numpy backend is selected by re-executing this script in a child
process with JBMVQE_FORCE_NUMPY=1 (backend choice is import-time).

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def timeit(fn, repeat):
    fn()  # warm-up (and numba JIT)
    start = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - start) / repeat


def run_benchmarks(repeat):
    from jbmvqe import fastpath, kernels
    from jbmvqe.ansatz import AnsatzCircuit
    from jbmvqe.grouping import group_qwc_greedy
    from jbmvqe.pauli import load_fixture

    rng = np.random.default_rng(0)
    results = {"backend": kernels.BACKEND}

    n = 14
    psi = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    psi = (psi / np.linalg.norm(psi)).astype(np.complex128)

    results["apply_ry (n=14)"] = timeit(
        lambda: kernels.apply_ry(psi, 6, 0.3), repeat)
    results["apply_h (n=14)"] = timeit(
        lambda: kernels.apply_h(psi, 6), repeat)
    results["apply_cnot (n=14)"] = timeit(
        lambda: kernels.apply_cnot(psi, 3, 9), repeat)

    values = rng.integers(0, 2 ** 28, size=500_000)
    results["parity (500k)"] = timeit(
        lambda: kernels.parity(values, 0b1011001), repeat)

    results["expectation_pauli (n=14)"] = timeit(
        lambda: kernels.expectation_pauli(psi, 0b101, 0b110, 1), repeat)

    probs = np.abs(psi) ** 2
    uniforms = rng.random(4159)
    results["sample_outcomes (n=14, 4159 shots)"] = timeit(
        lambda: kernels.sample_outcomes(probs, uniforms), repeat)

    h = load_fixture("h4")
    circuit = AnsatzCircuit(8, 4, 8)
    thetas = rng.uniform(0, np.pi / 5, (129, circuit.parameter_count))
    pairs = np.asarray(circuit.pairs, dtype=np.int64)
    results["states batch (H4, 129 rows)"] = timeit(
        lambda: fastpath.build_states_batch(thetas, pairs, 8, 8, 15), repeat)

    states = fastpath.build_states_batch(thetas, pairs, 8, 8, 15)
    u = rng.random((129, 4159))
    results["bell sample batch (H4)"] = timeit(
        lambda: fastpath.bell_sample_batch(states, 8, u), repeat)

    groups = group_qwc_greedy(h)
    seeds = list(range(len(groups)))
    results["projective batch (H4, 739 shots)"] = timeit(
        lambda: fastpath.projective_batch(states, h, groups, 739, seeds),
        repeat)
    return results


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", action="store_true",
                        help="print raw JSON (used for the child process)")
    args = parser.parse_args()

    mine = run_benchmarks(args.repeat)
    if args.json:
        print(json.dumps(mine))
        return 0
    if mine["backend"] != "numba":
        print("numba backend unavailable; showing numpy only")
        other = None
    else:
        env = dict(os.environ, JBMVQE_FORCE_NUMPY="1")
        out = subprocess.run(
            [sys.executable, __file__, "--repeat", str(args.repeat),
             "--json"],
            env=env, capture_output=True, text=True, check=True)
        other = json.loads(out.stdout)

    width = max(len(k) for k in mine) + 2
    header = f"{'kernel':<{width}} {'numba':>12} {'numpy':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for key, val in mine.items():
        if key == "backend":
            continue
        ref = other[key] if other else float("nan")
        ratio = ref / val if other else float("nan")
        print(f"{key:<{width}} {val * 1e3:>10.3f}ms {ref * 1e3:>10.3f}ms "
              f"{ratio:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
