"""Command-line experiment driver.

Commands:
  thresholds   print shot thresholds (or sign probabilities) over a grid
  groups       QWC group statistics for a Hamiltonian file
  groundstate  dense exact ground energy of a Hamiltonian file
  run          one optimization run -> CSV iteration log
  compare      both methods over many trials -> per-trial CSVs + JSON

Config files are INI text with an [experiment] section; see
`ExperimentConfig`. Trial i of `compare` uses seed_base + i, and initial
parameters are drawn uniformly from [0, pi/5) per seed.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .ansatz import AnsatzCircuit, apply_ansatz
from .engine import (IterationLog, OptimizerConfig, run_conventional_vqe,
                     run_jbm_vqe)
from .grouping import group_qwc_greedy
from .pauli import parse_hamiltonian
from .shots import shot_threshold, sign_success_prob, uniform_grid
from .statevector import exact_energy, exact_ground_energy, prepare_reference

CSV_COLUMNS = ("iteration", "est_energy", "exact_energy", "cum_shots",
               "signs_refreshed")

INIT_RANGE = (0.0, np.pi / 5)


@dataclass(frozen=True)
class ExperimentConfig:
    hamiltonian_path: str
    method: str = "both"  # JBM | conventional | both
    depth: int = 2
    trials: int = 1
    seed_base: int = 0
    output_dir: str = "out"
    learning_rate: float = 0.02
    shift: float = float(np.pi / 4)
    sign_period: int = 30
    bell_shots: int = 4159
    sign_shots_per_group: int = 513
    vqe_shots_per_group: int = 739
    stop_window: int = 200
    stop_delta: float = 0.001
    max_iterations: int = 1000
    oracle: bool = False
    # stop each compare trajectory once its exact energy first drops
    # below the Hartree-Fock reference (shots-to-beat-HF is unaffected:
    # everything before the crossing is unchanged)
    stop_at_hf: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.method not in ("JBM", "conventional", "both"):
            raise ValueError(f"unknown method {self.method!r}")

    def optimizer(self, rng_seed):
        return OptimizerConfig(
            learning_rate=self.learning_rate, shift=self.shift,
            sign_period=self.sign_period, bell_shots=self.bell_shots,
            sign_shots_per_group=self.sign_shots_per_group,
            vqe_shots_per_group=self.vqe_shots_per_group,
            stop_window=self.stop_window, stop_delta=self.stop_delta,
            max_iterations=self.max_iterations, rng_seed=rng_seed,
            oracle=self.oracle)


_BOOL_FIELDS = ("oracle", "stop_at_hf")
_INT_FIELDS = ("depth", "trials", "seed_base", "sign_period", "bell_shots",
               "sign_shots_per_group", "vqe_shots_per_group", "stop_window",
               "max_iterations")
_FLOAT_FIELDS = ("learning_rate", "shift", "stop_delta")


def parse_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser()
    parser.read_string(text)
    section = parser["experiment"]
    kwargs = {}
    for key, value in section.items():
        if key in _BOOL_FIELDS:
            kwargs[key] = section.getboolean(key)
        elif key in _INT_FIELDS:
            kwargs[key] = section.getint(key)
        elif key in _FLOAT_FIELDS:
            kwargs[key] = section.getfloat(key)
        else:
            kwargs[key] = value
    return ExperimentConfig(**kwargs)


def serialize_config(cfg: ExperimentConfig) -> str:
    parser = configparser.ConfigParser()
    parser["experiment"] = {
        k: repr(v) if isinstance(v, float) else str(v)
        for k, v in asdict(cfg).items()}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def load_hamiltonian(path):
    return parse_hamiltonian(Path(path).read_text())


def initial_parameters(circuit: AnsatzCircuit, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.uniform(*INIT_RANGE, circuit.parameter_count)


def write_log_csv(log: IterationLog, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for i in range(len(log)):
            writer.writerow([log.iterations[i], repr(log.est_energies[i]),
                             repr(log.exact_energies[i]), log.cum_shots[i],
                             int(log.signs_refreshed[i])])


def shots_to_beat_hf(log: IterationLog, hf_energy: float):
    """First cumulative shot count whose exact energy is below HF, or None.

    Uses the exact (oracle) trajectory, not the noisy estimate, so that
    estimator flukes do not count as success.
    """
    for exact, shots in zip(log.exact_energies, log.cum_shots):
        if exact < hf_energy:
            return shots
    return None


def _run_one(h, cfg: ExperimentConfig, method: str, seed: int,
             stop_below_energy=None):
    n_electrons = int(h.metadata.get("n_electrons", 0))
    circuit = AnsatzCircuit(h.n_qubits, n_electrons, cfg.depth)
    theta0 = initial_parameters(circuit, seed)
    runner = run_jbm_vqe if method == "JBM" else run_conventional_vqe
    opt = cfg.optimizer(seed)
    if stop_below_energy is not None:
        opt.stop_below_energy = stop_below_energy
    return runner(h, circuit, theta0, opt)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_thresholds(args):
    taus = [float(t) for t in args.tau.split(",")]
    ps = [float(p) for p in args.p.split(",")]
    kind = args.kind.upper()
    if kind == "SIGN":
        shots = [int(m) for m in args.shots.split(",")]
        ys = [float(y) for y in args.expectation.split(",")]
        print("m\t" + "\t".join(f"y={y}" for y in ys))
        for m in shots:
            row = [f"{sign_success_prob(m, y):.6f}" for y in ys]
            print(f"{m}\t" + "\t".join(row))
        return 0
    if args.hamiltonian:
        h = load_hamiltonian(args.hamiltonian)
        _, ground = exact_ground_energy(h)
        from .statevector import exact_expectation
        grid = np.array([exact_expectation(ground, t.operator)
                         for t in h.terms])
    else:
        grid = uniform_grid(args.grid_count, endpoint=args.grid == "endpoint")
    print("tau\t" + "\t".join(f"p={p}" for p in ps))
    for tau in taus:
        row = [str(shot_threshold(kind, tau, p, grid)) for p in ps]
        print(f"{tau}\t" + "\t".join(row))
    return 0


def cmd_groups(args):
    h = load_hamiltonian(args.hamiltonian)
    groups = group_qwc_greedy(h)
    print(f"terms: {len(h.terms)}")
    print(f"groups: {len(groups)}")
    for i, g in enumerate(groups):
        print(f"group {i}: size {len(g.members)} basis {g.basis}")
    return 0


def cmd_groundstate(args):
    h = load_hamiltonian(args.hamiltonian)
    energy, state = exact_ground_energy(h)
    print(f"ground_energy: {energy!r}")
    if args.out:
        np.save(Path(args.out) / "ground_state.npy", state.amplitudes)
    return 0


def cmd_run(args):
    cfg = parse_config(Path(args.config).read_text())
    if args.seed is not None:
        cfg = replace(cfg, seed_base=args.seed)
    if args.oracle:
        cfg = replace(cfg, oracle=True)
    h = load_hamiltonian(cfg.hamiltonian_path)
    method = "JBM" if cfg.method == "both" else cfg.method
    log = _run_one(h, cfg, method, cfg.seed_base)
    out_dir = Path(args.out or cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / f"run_{method}_{cfg.seed_base}.csv"
    write_log_csv(log, out_path)
    print(f"wrote {out_path} ({len(log)} iterations)")
    return 0


def cmd_compare(args):
    cfg = parse_config(Path(args.config).read_text())
    if args.oracle:
        cfg = replace(cfg, oracle=True)
    h = load_hamiltonian(cfg.hamiltonian_path)
    n_electrons = int(h.metadata.get("n_electrons", 0))
    hf_energy = exact_energy(prepare_reference(h.n_qubits, n_electrons), h)
    out_dir = Path(args.out or cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    trials = []
    for i in range(cfg.trials):
        seed = cfg.seed_base + i
        record = {"seed": seed}
        for method in ("conventional", "JBM"):
            try:
                log = _run_one(h, cfg, method, seed,
                               hf_energy if cfg.stop_at_hf else None)
            except Exception as exc:  # keep going; report per-seed
                record[method] = {"error": str(exc)}
                continue
            write_log_csv(log, out_dir / f"trial_{seed}_{method}.csv")
            record[method] = {
                "iterations": len(log),
                "final_exact_energy": log.exact_energies[-1],
                "shots_to_beat_hf": shots_to_beat_hf(log, hf_energy),
            }
        trials.append(record)
        if not args.quiet:
            print(f"trial {seed}: " + ", ".join(
                f"{m}={record[m].get('shots_to_beat_hf')}"
                for m in ("conventional", "JBM") if m in record))

    ratios = []
    succ = {"conventional": 0, "JBM": 0}
    for r in trials:
        s = {m: r.get(m, {}).get("shots_to_beat_hf") for m in succ}
        for m in succ:
            succ[m] += s[m] is not None
        if s["conventional"] is not None and s["JBM"] is not None:
            ratios.append(s["conventional"] / s["JBM"])

    summary = {
        "hamiltonian": cfg.hamiltonian_path,
        "trials": cfg.trials,
        "hf_energy": hf_energy,
        "success_rate": {m: succ[m] / cfg.trials for m in succ},
        "ratio_policy": "mean over trials where both methods beat HF; "
                        "failures contribute infinity and are excluded",
        "mean_ratio_conventional_over_jbm":
            float(np.mean(ratios)) if ratios else None,
        "ratios": ratios,
        "per_trial": trials,
    }
    out_path = out_dir / "compare.json"
    out_path.write_text(json.dumps(summary, indent=2) + "\n")
    print(f"mean ratio conventional/JBM: "
          f"{summary['mean_ratio_conventional_over_jbm']}")
    print(f"wrote {out_path}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="jbmvqe",
        description="VQE / Bell-measurement-accelerated VQE experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("thresholds", help="shot thresholds over a grid")
    p.add_argument("--tau", default="0.05", help="comma-separated tau list")
    p.add_argument("--p", default="0.9", help="comma-separated p list")
    p.add_argument("--kind", default="SM", choices=["SM", "JBM", "SIGN",
                                                    "sm", "jbm", "sign"])
    p.add_argument("--grid-count", type=int, default=2000)
    p.add_argument("--grid", default="endpoint",
                   choices=["endpoint", "midpoint"])
    p.add_argument("--hamiltonian",
                   help="use this file's exact ground-state expectations "
                        "as the grid instead of the uniform grid")
    p.add_argument("--shots", default="17",
                   help="odd shot counts for --kind SIGN")
    p.add_argument("--expectation", default="0.2",
                   help="expectations for --kind SIGN")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("groups", help="QWC grouping statistics")
    p.add_argument("hamiltonian")
    p.set_defaults(func=cmd_groups)

    p = sub.add_parser("groundstate", help="dense exact ground energy")
    p.add_argument("hamiltonian")
    p.add_argument("--out", help="also dump the ground-state amplitudes")
    p.set_defaults(func=cmd_groundstate)

    p = sub.add_parser("run", help="single optimization run -> CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--oracle", action="store_true",
                   help="infinite-shot mode (exact estimates)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="conventional vs JBM over trials")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
