"""Qubit-wise-commuting measurement grouping (sorted greedy first-fit).

Terms are visited in descending |coefficient| order (ties broken by
operator lexicographic order) and each joins the first existing group it
qubit-wise commutes with, else opens a new group. All members of a group
share one measurement basis: the per-qubit join of their letters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import Hamiltonian, PauliOperator, qwc_compatible
from .statevector import StateVector, apply_basis_change, outcome_string, \
    sample_state


@dataclass(frozen=True)
class MeasurementGroup:
    members: tuple  # term indices into the Hamiltonian
    basis: str  # per-qubit letter in {I, X, Y, Z}


def _join_basis(basis: str, op: PauliOperator) -> str:
    return "".join(o if b == "I" else b for b, o in zip(basis, op.letters))


def group_qwc_greedy(h: Hamiltonian) -> list:
    """Partition the Hamiltonian terms into QWC measurement groups."""
    if not h.terms:
        raise ValueError("cannot group an empty Hamiltonian")
    order = sorted(range(len(h.terms)),
                   key=lambda j: (-abs(h.terms[j].coefficient),
                                  h.terms[j].operator.letters))
    groups = []  # mutable (member-list, basis) pairs, creation order
    for j in order:
        op = h.terms[j].operator
        for g in groups:
            if qwc_compatible(PauliOperator(g[1]), op):
                g[0].append(j)
                g[1] = _join_basis(g[1], op)
                break
        else:
            groups.append([[j], op.letters])
    return [MeasurementGroup(tuple(m), b) for m, b in groups]


def group_parity_estimates(outcomes: np.ndarray, h: Hamiltonian,
                           group: MeasurementGroup) -> dict:
    """Per-member expectation estimates from basis-rotated outcomes.

    `outcomes` are computational-basis integers measured after the
    group-basis rotation; each member's estimate is the mean of the
    (-1)**parity of its support bits.
    """
    from . import kernels
    est = {}
    for j in group.members:
        op = h.terms[j].operator
        support = op.x_mask | op.z_mask
        eig = 1.0 - 2.0 * kernels.parity(outcomes, support)
        est[j] = float(np.mean(eig))
    return est


def estimate_group_expectations(state: StateVector, h: Hamiltonian,
                                group: MeasurementGroup, shots: int,
                                rng_seed: int) -> dict:
    """One projective batch in the group basis; term-index -> estimate."""
    rotated = apply_basis_change(state, group.basis)
    outcomes = sample_state(rotated, shots, rng_seed)
    return group_parity_estimates(outcomes, h, group)


def format_outcomes(outcomes, n_qubits):
    return [outcome_string(k, n_qubits) for k in outcomes]
