"""Joint Bell measurement on a doubled register.

Register A occupies qubits [0, n) and register B qubits [n, 2n) of the
doubled state. The Bell transform is CNOT(A_i -> B_i) followed by H on
A_i, per pair. An outcome integer s therefore carries a_i at bit i and
b_i at bit n + i. Eigenvalues of P (x) P on the Bell basis:

    I -> +1,  X -> (-1)^a,  Y -> (-1)^(a+b+1),  Z -> (-1)^b

so every <P>^2 is estimable from one shared outcome set.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .pauli import PauliOperator
from .statevector import StateVector, sample_state


def doubled_bell_state(state: StateVector) -> StateVector:
    """(H_A (x) I) . CNOT_{A->B} applied transversally to |psi> (x) |psi>."""
    n = state.n_qubits
    if n > 12:
        raise ValueError("doubled register limited to 12 input qubits")
    amps = np.kron(state.amplitudes, state.amplitudes)  # B high bits, A low
    for q in range(n):
        kernels.apply_cnot(amps, q, n + q)
        kernels.apply_h(amps, q)
    return StateVector(2 * n, amps)


def sample_bell(state: StateVector, shots: int, rng_seed: int) -> np.ndarray:
    """`shots` Bell outcomes of the doubled state, as 2n-bit integers."""
    return sample_state(doubled_bell_state(state), shots, rng_seed)


def bell_eigenvalue_mask(op: PauliOperator) -> tuple:
    """(mask, parity_offset): eigenvalue of outcome s is
    (-1)**(popcount(s & mask) + parity_offset)."""
    n = op.n_qubits
    # X and Y read the a-bit; Y and Z read the b-bit; each Y flips parity.
    mask = op.x_mask | (op.z_mask << n)
    return mask, op.y_count & 1


def pauli_square_estimate(outcomes, op: PauliOperator,
                          weights=None) -> float:
    """Mean Bell-basis eigenvalue of P (x) P over outcomes: estimates <P>^2.

    `outcomes` are 2n-bit integers; optional `weights` replace the
    uniform 1/shots weighting (used with exact outcome probabilities).
    """
    outcomes = np.asarray(outcomes)
    mask, offset = bell_eigenvalue_mask(op)
    eig = 1.0 - 2.0 * ((kernels.parity(outcomes, mask) + offset) % 2)
    if weights is None:
        return float(np.mean(eig))
    return float(np.dot(np.asarray(weights, dtype=np.float64), eig))


def abs_from_square(squared: float) -> float:
    """|<P>| estimate sqrt(max{0, squared})."""
    if not -1.0 - 1e-12 <= squared <= 1.0 + 1e-12:
        raise ValueError(f"squared estimate {squared} outside [-1, 1]")
    return float(np.sqrt(max(0.0, min(1.0, squared))))


def batch_abs_estimates(outcomes, operators) -> np.ndarray:
    """|<P>| estimates for many operators from one shared outcome set."""
    outcomes = np.asarray(outcomes)
    out = np.empty(len(operators))
    for j, op in enumerate(operators):
        out[j] = abs_from_square(pauli_square_estimate(outcomes, op))
    return out


def bias_prediction(shots: int, true_expectation: float) -> tuple:
    """Predicted bias of the abs estimator and the prediction's validity.

    At <P> = 0 the bias is +sqrt(sigma)/3 with sigma = 1/sqrt(shots).
    Otherwise it is -sigma^2 / (24 |<P>|^3) with
    sigma = sqrt((1 - <P>^4) / shots), valid only when <P>^2 > sigma.
    Returns (bias, valid).
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    y = true_expectation
    if not -1.0 <= y <= 1.0:
        raise ValueError("expectation outside [-1, 1]")
    if y == 0.0:
        sigma = 1.0 / np.sqrt(shots)
        return float(np.sqrt(sigma) / 3.0), True
    sigma = np.sqrt((1.0 - y ** 4) / shots)
    bias = -sigma ** 2 / (24.0 * abs(y) ** 3)
    return float(bias), bool(y * y > sigma)
