"""Particle-number-conserving, real-valued hardware-efficient ansatz.

The circuit acts on the reference state |0...01...1> (the n_electrons
lowest qubits occupied). Each layer places one two-qubit block on every
ring pair (0,1), (1,2), ..., (n-2,n-1), (n-1,0) in that order (a single
(0,1) block when n = 2), and each block carries one rotation angle:

    block(theta) on (a, b) = CNOT(a->b); Ry(theta) on a; CNOT(b->a);
                             Ry(-theta) on a; CNOT(a->b)

The block acts as the reflection [[sin t, cos t], [cos t, -sin t]] on
the span of |01>, |10> and as +1 / -1 on |00> / |11>, so it conserves
Hamming weight and keeps amplitudes real. The sequential ring ordering
(rather than disjoint brick pairs) is what lets the circuit leave the
Slater-determinant manifold; see the design notes in the repository.

parameter_count = depth * blocks_per_layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .statevector import StateVector, prepare_reference


def ring_pairs(n_qubits: int) -> list:
    """Block placements for one layer."""
    if n_qubits < 2:
        raise ValueError("ansatz needs at least 2 qubits")
    if n_qubits == 2:
        return [(0, 1)]
    return [(q, (q + 1) % n_qubits) for q in range(n_qubits)]


@dataclass(frozen=True)
class AnsatzCircuit:
    n_qubits: int
    n_electrons: int
    depth: int
    pairs: tuple = field(init=False)

    def __post_init__(self):
        if not 0 <= self.n_electrons <= self.n_qubits:
            raise ValueError("invalid electron count")
        if self.depth < 1:
            raise ValueError("depth must be positive")
        object.__setattr__(self, "pairs", tuple(ring_pairs(self.n_qubits)))

    @property
    def parameter_count(self):
        return self.depth * len(self.pairs)


def apply_block(amplitudes: np.ndarray, a: int, b: int, theta: float):
    """Apply one ansatz block in place."""
    kernels.apply_cnot(amplitudes, a, b)
    kernels.apply_ry(amplitudes, a, theta)
    kernels.apply_cnot(amplitudes, b, a)
    kernels.apply_ry(amplitudes, a, -theta)
    kernels.apply_cnot(amplitudes, a, b)


def apply_ansatz(circuit: AnsatzCircuit, params) -> StateVector:
    """U(theta) applied to the reference state."""
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (circuit.parameter_count,):
        raise ValueError(
            f"expected {circuit.parameter_count} parameters, "
            f"got {params.shape}")
    state = prepare_reference(circuit.n_qubits, circuit.n_electrons)
    k = 0
    for _ in range(circuit.depth):
        for a, b in circuit.pairs:
            apply_block(state.amplitudes, a, b, params[k])
            k += 1
    return state
