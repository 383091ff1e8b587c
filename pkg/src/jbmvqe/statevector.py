"""Dense statevector simulation: reference states, exact expectations,
projective sampling, and a dense eigensolver oracle.

Basis-state integer k has qubit q at bit q (qubit 0 = least significant
bit); outcome strings print qubit 0 first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .pauli import Hamiltonian, PauliOperator

_PAULI_1Q = {
    "I": np.eye(2),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]]),
    "Z": np.diag([1.0, -1.0]),
}


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray  # complex128, length 2**n_qubits

    @classmethod
    def from_basis_state(cls, n_qubits, index):
        amps = np.zeros(2 ** n_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n_qubits, amps)

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def copy(self):
        return StateVector(self.n_qubits, self.amplitudes.copy())


def prepare_reference(n_qubits: int, n_electrons: int) -> StateVector:
    """Computational basis state with the n_electrons lowest qubits in |1>."""
    if not 0 <= n_electrons <= n_qubits:
        raise ValueError(
            f"n_electrons = {n_electrons} outside [0, {n_qubits}]")
    return StateVector.from_basis_state(n_qubits, (1 << n_electrons) - 1)


def exact_expectation(state: StateVector, op: PauliOperator) -> float:
    """<state| op |state>, exact (real)."""
    if op.n_qubits != state.n_qubits:
        raise ValueError("operator width differs from state width")
    return kernels.expectation_pauli(
        state.amplitudes, op.x_mask, op.z_mask, op.y_count)


def exact_energy(state: StateVector, h: Hamiltonian) -> float:
    """Sum_j lambda_j <P_j> + identity_offset, exact."""
    if h.n_qubits != state.n_qubits:
        raise ValueError("Hamiltonian width differs from state width")
    return h.identity_offset + sum(
        t.coefficient * exact_expectation(state, t.operator) for t in h.terms)


def apply_basis_change(state: StateVector, basis: str) -> StateVector:
    """Rotate to the measurement basis: H for X, H * S-dagger for Y."""
    out = state.copy()
    for q, letter in enumerate(basis):
        if letter == "X":
            kernels.apply_h(out.amplitudes, q)
        elif letter == "Y":
            kernels.apply_sdg(out.amplitudes, q)
            kernels.apply_h(out.amplitudes, q)
        elif letter not in "IZ":
            raise ValueError(f"invalid basis letter {letter!r}")
    return out


def sample_state(state: StateVector, shots: int, rng_seed: int) -> np.ndarray:
    """`shots` computational-basis outcomes (integers), seeded."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    uniforms = np.random.Generator(np.random.PCG64(rng_seed)).random(shots)
    return kernels.sample_outcomes(state.probabilities(), uniforms)


def outcome_string(outcome: int, n_qubits: int) -> str:
    """Render an outcome integer as a bit string, qubit 0 leftmost."""
    return "".join(str((outcome >> q) & 1) for q in range(n_qubits))


def sample_projective(state: StateVector, group_basis: str, shots: int,
                      rng_seed: int) -> list:
    """Measure all qubits in the per-qubit basis; n-bit outcome strings."""
    if len(group_basis) != state.n_qubits:
        raise ValueError("basis width differs from state width")
    rotated = apply_basis_change(state, group_basis)
    outcomes = sample_state(rotated, shots, rng_seed)
    return [outcome_string(k, state.n_qubits) for k in outcomes]


def hamiltonian_matrix(h: Hamiltonian) -> np.ndarray:
    """Dense matrix of sum_j lambda_j P_j (identity_offset NOT included)."""
    dim = 2 ** h.n_qubits
    mat = np.zeros((dim, dim), dtype=np.complex128)
    idx = np.arange(dim)
    for t in h.terms:
        op = t.operator
        signs = 1.0 - 2.0 * kernels.parity_numpy(idx, op.z_mask)
        phase = 1j ** op.y_count
        mat[idx ^ op.x_mask, idx] += t.coefficient * phase * signs
    return mat


def exact_ground_energy(h: Hamiltonian) -> tuple:
    """(minimal eigenvalue + identity_offset, ground StateVector)."""
    if h.n_qubits > 14:
        raise ValueError("dense diagonalization limited to 14 qubits")
    mat = hamiltonian_matrix(h)
    vals, vecs = np.linalg.eigh(mat)
    state = StateVector(h.n_qubits, vecs[:, 0].astype(np.complex128))
    return float(vals[0]) + h.identity_offset, state
