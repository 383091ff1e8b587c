"""Optimization core: Bell-accelerated VQE (subroutines 1 and 2), the
conventional grouped-projective VQE baseline, parameter-shift gradients,
the windowed stopping rule, and exact shot accounting.

Energy model: E(theta) = sum_j lambda_j * s_j * |<P_j>| + offset, where
the signs s_j come from grouped projective measurement (refreshed every
`sign_period` iterations) and the absolute values from joint Bell
measurement. Gradients use the parameter-shift rule with shift alpha
and prefactor 1 / (2 sin alpha).

Per-iteration shot census (N_theta parameters, G measurement groups):
  subroutine 1: (2 N_theta + 1) * (bell_shots + sign_shots_per_group * G)
  subroutine 2: (2 N_theta + 1) * bell_shots
  conventional: (2 N_theta + 1) * vqe_shots_per_group * G
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fastpath
from .ansatz import AnsatzCircuit, apply_ansatz
from .bell import batch_abs_estimates, sample_bell
from .grouping import estimate_group_expectations, group_qwc_greedy
from .pauli import Hamiltonian
from .statevector import exact_energy, exact_expectation


@dataclass
class OptimizerConfig:
    learning_rate: float = 0.02
    shift: float = np.pi / 4
    sign_period: int = 30
    bell_shots: int = 4159
    sign_shots_per_group: int = 513
    vqe_shots_per_group: int = 739
    stop_window: int = 200
    stop_delta: float = 0.001
    max_iterations: int = 10000
    rng_seed: int = 0
    oracle: bool = False  # infinite-shot mode: exact signs and values
    record_parameters: bool = False
    # optional early exit once the exact energy drops below this value
    # (used by `compare` to stop at the Hartree-Fock crossing)
    stop_below_energy: float = None

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0 < self.shift < np.pi:
            raise ValueError("shift must lie in (0, pi)")
        if self.sign_period < 1:
            raise ValueError("sign_period must be >= 1")
        for name in ("bell_shots", "sign_shots_per_group",
                     "vqe_shots_per_group"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


@dataclass
class SignCache:
    energy_signs: np.ndarray  # (M,) of +-1
    gradient_signs_plus: np.ndarray  # (N_theta, M) of +-1
    gradient_signs_minus: np.ndarray  # (N_theta, M) of +-1
    recorded_at_iteration: int


@dataclass
class IterationLog:
    iterations: list = field(default_factory=list)
    est_energies: list = field(default_factory=list)
    exact_energies: list = field(default_factory=list)
    cum_shots: list = field(default_factory=list)
    signs_refreshed: list = field(default_factory=list)
    parameters: list = field(default_factory=list)

    def append(self, iteration, est, exact, shots, refreshed, params=None):
        if self.cum_shots and shots <= self.cum_shots[-1]:
            raise ValueError("cumulative shots must strictly increase")
        self.iterations.append(iteration)
        self.est_energies.append(est)
        self.exact_energies.append(exact)
        self.cum_shots.append(shots)
        self.signs_refreshed.append(refreshed)
        if params is not None:
            self.parameters.append(np.array(params))

    def __len__(self):
        return len(self.iterations)


class _SeedStream:
    """Deterministic stream of independent 64-bit seeds."""

    def __init__(self, seed):
        self._ss = np.random.SeedSequence(seed)

    def next(self):
        child = self._ss.spawn(1)[0]
        return int(child.generate_state(1, np.uint64)[0])


class _Estimator:
    """Shared context: Hamiltonian, circuit, groups, and the seed stream."""

    def __init__(self, h: Hamiltonian, circuit: AnsatzCircuit,
                 cfg: OptimizerConfig):
        self.h = h
        self.circuit = circuit
        self.cfg = cfg
        self.groups = group_qwc_greedy(h)
        self.operators = [t.operator for t in h.terms]
        self.coeffs = np.array([t.coefficient for t in h.terms])
        self.seeds = _SeedStream(cfg.rng_seed)
        self.pairs = np.asarray(circuit.pairs, dtype=np.int64)
        self.ref_index = (1 << circuit.n_electrons) - 1
        self.bell_table = None if cfg.oracle else fastpath.bell_eig_table(
            self.operators, circuit.n_qubits)

    # ---- building blocks ------------------------------------------------

    def state(self, theta):
        return apply_ansatz(self.circuit, theta)

    def exact_expectations(self, theta):
        st = self.state(theta)
        return np.array([exact_expectation(st, op) for op in self.operators])

    def measured_signs(self, theta, shots_per_group):
        """Per-term signs from one grouped projective batch (ties -> +1)."""
        if self.cfg.oracle:
            vals = self.exact_expectations(theta)
        else:
            st = self.state(theta)
            vals = np.empty(len(self.operators))
            for g in self.groups:
                est = estimate_group_expectations(
                    st, self.h, g, shots_per_group, self.seeds.next())
                for j, v in est.items():
                    vals[j] = v
        return np.where(vals >= 0.0, 1.0, -1.0)

    def abs_values(self, theta):
        """Per-term |<P_j>| estimates from one Bell batch of bell_shots."""
        if self.cfg.oracle:
            return np.abs(self.exact_expectations(theta))
        outcomes = sample_bell(self.state(theta), self.cfg.bell_shots,
                               self.seeds.next())
        return batch_abs_estimates(outcomes, self.operators)

    def projective_expectations(self, theta, shots_per_group):
        """Signed per-term estimates (conventional VQE path)."""
        if self.cfg.oracle:
            return self.exact_expectations(theta)
        st = self.state(theta)
        vals = np.empty(len(self.operators))
        for g in self.groups:
            est = estimate_group_expectations(
                st, self.h, g, shots_per_group, self.seeds.next())
            for j, v in est.items():
                vals[j] = v
        return vals

    # ---- batched building blocks (shot mode) -----------------------------
    #
    # A gradient step needs estimates at the 2 N_theta + 1 points
    # [theta, theta + a e_0, theta - a e_0, ...]; the rows below follow
    # that order (row 0 = theta, rows 1+2l / 2+2l = +/- shift on l).

    def theta_block(self, theta):
        n_par = self.circuit.parameter_count
        block = np.tile(np.asarray(theta, dtype=np.float64),
                        (2 * n_par + 1, 1))
        for l in range(n_par):
            block[1 + 2 * l, l] += self.cfg.shift
            block[2 + 2 * l, l] -= self.cfg.shift
        return block

    def states_batch(self, thetas):
        return fastpath.build_states_batch(
            thetas, self.pairs, self.circuit.n_qubits, self.circuit.depth,
            self.ref_index)

    def abs_values_batch(self, states):
        rng = np.random.Generator(np.random.PCG64(self.seeds.next()))
        uniforms = rng.random((states.shape[0], self.cfg.bell_shots))
        outcomes = fastpath.bell_sample_batch(
            states, self.circuit.n_qubits, uniforms)
        return fastpath.bell_abs_batch(
            outcomes, self.operators, self.circuit.n_qubits,
            self.cfg.bell_shots, table=self.bell_table)

    def projective_batch(self, states, shots_per_group):
        seeds = [self.seeds.next() for _ in self.groups]
        return fastpath.projective_batch(
            states, self.h, self.groups, shots_per_group, seeds)

    def energy_from(self, per_term):
        return float(self.coeffs @ per_term) + self.h.identity_offset

    def shifted(self, theta, l, direction):
        out = np.array(theta, dtype=np.float64)
        out[l] += direction * self.cfg.shift
        return out


def subroutine1(est: _Estimator, theta, iteration=0):
    """Signed estimation: grouped signs + Bell abs at all 2N+1 points.

    Returns (energy, gradient, SignCache, shots_used).
    """
    cfg, n_par = est.cfg, est.circuit.parameter_count
    inv = 1.0 / (2.0 * np.sin(cfg.shift))

    if cfg.oracle:
        signs0 = est.measured_signs(theta, cfg.sign_shots_per_group)
        energy = est.energy_from(signs0 * est.abs_values(theta))
        signs_p = np.empty((n_par, len(est.operators)))
        signs_m = np.empty_like(signs_p)
        for l in range(n_par):
            signs_p[l] = est.measured_signs(
                est.shifted(theta, l, +1), cfg.sign_shots_per_group)
            signs_m[l] = est.measured_signs(
                est.shifted(theta, l, -1), cfg.sign_shots_per_group)
        grad = parameter_shift_gradient_exact(est.h, est.circuit, theta,
                                              cfg.shift)
    else:
        states = est.states_batch(est.theta_block(theta))
        vals = est.projective_batch(states, cfg.sign_shots_per_group)
        signs = np.where(vals >= 0.0, 1.0, -1.0)
        per_term = signs * est.abs_values_batch(states)
        energies = per_term @ est.coeffs
        energy = float(energies[0]) + est.h.identity_offset
        grad = inv * (energies[1::2] - energies[2::2])  # offsets cancel
        signs0, signs_p, signs_m = signs[0], signs[1::2], signs[2::2]
    cache = SignCache(signs0, signs_p, signs_m, iteration)
    shots = (2 * n_par + 1) * (cfg.bell_shots
                               + cfg.sign_shots_per_group * len(est.groups))
    return energy, grad, cache, shots


def subroutine2(est: _Estimator, theta, cache: SignCache):
    """Bell-only estimation with cached signs: (energy, gradient, shots)."""
    cfg, n_par = est.cfg, est.circuit.parameter_count
    if cache.energy_signs.shape[0] != len(est.operators) or \
            cache.gradient_signs_plus.shape != (n_par, len(est.operators)):
        raise ValueError("sign cache dimensions do not match")
    inv = 1.0 / (2.0 * np.sin(cfg.shift))

    if cfg.oracle:
        energy = est.energy_from(cache.energy_signs * est.abs_values(theta))
        grad = parameter_shift_gradient_exact(est.h, est.circuit, theta,
                                              cfg.shift)
    else:
        states = est.states_batch(est.theta_block(theta))
        absv = est.abs_values_batch(states)
        energy = est.energy_from(cache.energy_signs * absv[0])
        ep = (cache.gradient_signs_plus * absv[1::2]) @ est.coeffs
        em = (cache.gradient_signs_minus * absv[2::2]) @ est.coeffs
        grad = inv * (ep - em)
    return energy, grad, (2 * n_par + 1) * cfg.bell_shots


def conventional_step(est: _Estimator, theta):
    """Grouped projective energy + gradient: (energy, gradient, shots)."""
    cfg, n_par = est.cfg, est.circuit.parameter_count
    inv = 1.0 / (2.0 * np.sin(cfg.shift))
    if cfg.oracle:
        energy = est.energy_from(
            est.projective_expectations(theta, cfg.vqe_shots_per_group))
        grad = parameter_shift_gradient_exact(est.h, est.circuit, theta,
                                              cfg.shift)
    else:
        states = est.states_batch(est.theta_block(theta))
        vals = est.projective_batch(states, cfg.vqe_shots_per_group)
        energies = vals @ est.coeffs
        energy = float(energies[0]) + est.h.identity_offset
        grad = inv * (energies[1::2] - energies[2::2])
    return energy, grad, (2 * n_par + 1) * cfg.vqe_shots_per_group * len(
        est.groups)


def stopping_rule(log: IterationLog, window: int, delta: float) -> bool:
    """True iff the latest completed window's mean estimated energy failed
    to drop by at least delta below the previous window's mean."""
    if window < 1:
        raise ValueError("window must be >= 1")
    k = len(log) // window
    if k < 2:
        return False
    e = np.asarray(log.est_energies)
    prev = e[(k - 2) * window:(k - 1) * window].mean()
    last = e[(k - 1) * window:k * window].mean()
    return bool(prev - last < delta)


def _run(h, circuit, theta0, cfg, step):
    est = _Estimator(h, circuit, cfg)
    theta = np.array(theta0, dtype=np.float64)
    if theta.shape != (circuit.parameter_count,):
        raise ValueError("initial parameter length mismatch")
    log = IterationLog()
    cum = 0
    cache = None
    for it in range(cfg.max_iterations):
        energy, grad, shots, refreshed, cache = step(est, theta, it, cache)
        cum += shots
        exact = exact_energy(est.state(theta), h)
        log.append(it + 1, energy, exact, cum, refreshed,
                   theta if cfg.record_parameters else None)
        theta = theta - cfg.learning_rate * grad
        if cfg.stop_below_energy is not None and \
                exact < cfg.stop_below_energy:
            break
        if len(log) % cfg.stop_window == 0 and \
                stopping_rule(log, cfg.stop_window, cfg.stop_delta):
            break
    return log


def run_jbm_vqe(h: Hamiltonian, circuit: AnsatzCircuit, theta0,
                cfg: OptimizerConfig) -> IterationLog:
    """Algorithm main loop: subroutine 1 every sign_period iterations,
    subroutine 2 with the cached signs otherwise."""

    def step(est, theta, it, cache):
        if it % cfg.sign_period == 0:
            energy, grad, cache, shots = subroutine1(est, theta, it)
            return energy, grad, shots, True, cache
        energy, grad, shots = subroutine2(est, theta, cache)
        return energy, grad, shots, False, cache

    return _run(h, circuit, theta0, cfg, step)


def run_conventional_vqe(h: Hamiltonian, circuit: AnsatzCircuit, theta0,
                         cfg: OptimizerConfig) -> IterationLog:
    """Baseline: grouped projective estimation at every parameter point."""

    def step(est, theta, it, cache):
        energy, grad, shots = conventional_step(est, theta)
        return energy, grad, shots, False, cache

    return _run(h, circuit, theta0, cfg, step)


def parameter_shift_gradient_exact(h: Hamiltonian, circuit: AnsatzCircuit,
                                   theta, alpha) -> np.ndarray:
    """Exact parameter-shift gradient of the exact energy.

    Each block parameter appears in a pair of opposite Ry rotations, so
    the energy is a two-frequency trigonometric polynomial per parameter:
    E(t) = c0 + c1 cos t + s1 sin t + c2 cos 2t + s2 sin 2t. A single
    central difference D(a) = E(t+a) - E(t-a) mixes the two harmonics
    (D(a) = 2 sin(a) g1 + 2 sin(2a) g2, with E' = g1 + 2 g2), so the
    exact rule solves the 2x2 system from shifts alpha and alpha/2.
    The result is independent of alpha.
    """
    if not 0 < alpha < np.pi:
        raise ValueError("alpha must lie in (0, pi)")
    theta = np.asarray(theta, dtype=np.float64)

    def energy_at(t):
        return exact_energy(apply_ansatz(circuit, t), h)

    return _two_frequency_gradient(energy_at, theta, alpha,
                                   circuit.parameter_count)


def _two_frequency_gradient(energy_at, theta, alpha, n_par):
    sa, s2a, sha = np.sin(alpha), np.sin(2 * alpha), np.sin(alpha / 2)
    det = 4.0 * (sa * sa - s2a * sha)
    grad = np.empty(n_par)
    for l in range(n_par):
        def diff(shift):
            tp, tm = theta.copy(), theta.copy()
            tp[l] += shift
            tm[l] -= shift
            return energy_at(tp) - energy_at(tm)

        d1, d2 = diff(alpha), diff(alpha / 2)
        g1 = (2.0 * sa * d1 - 2.0 * s2a * d2) / det
        g2 = (-2.0 * sha * d1 + 2.0 * sa * d2) / det
        grad[l] = g1 + 2.0 * g2
    return grad
