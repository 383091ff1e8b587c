"""Batched shot-mode pipelines against the scalar implementations."""

import numpy as np
import pytest

from jbmvqe import fastpath
from jbmvqe.ansatz import AnsatzCircuit, apply_ansatz
from jbmvqe.bell import batch_abs_estimates, doubled_bell_state
from jbmvqe.grouping import group_qwc_greedy
from jbmvqe.pauli import load_fixture
from jbmvqe.statevector import exact_expectation


@pytest.fixture(scope="module")
def h2():
    return load_fixture("h2")


def theta_matrix(circuit, batch, seed):
    rng = np.random.default_rng(seed)
    return rng.uniform(-np.pi, np.pi, (batch, circuit.parameter_count))


def batch_states(circuit, thetas):
    return fastpath.build_states_batch(
        thetas, np.asarray(circuit.pairs, dtype=np.int64),
        circuit.n_qubits, circuit.depth, (1 << circuit.n_electrons) - 1)


def test_states_match_scalar_ansatz_bit_exact():
    circuit = AnsatzCircuit(4, 2, 3)
    thetas = theta_matrix(circuit, 6, seed=0)
    states = batch_states(circuit, thetas)
    for r in range(6):
        ref = apply_ansatz(circuit, thetas[r]).amplitudes
        assert np.abs(ref.imag).max() == 0.0
        np.testing.assert_array_equal(states[r], ref.real)


def test_numpy_state_builder_matches_numba():
    circuit = AnsatzCircuit(6, 3, 2)
    thetas = theta_matrix(circuit, 4, seed=1)
    a = batch_states(circuit, thetas)
    b = fastpath.build_states_batch_numpy(
        thetas, np.asarray(circuit.pairs, dtype=np.int64),
        circuit.n_qubits, circuit.depth, 7)
    np.testing.assert_allclose(a, b, atol=1e-14)


def test_bell_sample_backends_identical():
    circuit = AnsatzCircuit(4, 2, 2)
    states = batch_states(circuit, theta_matrix(circuit, 3, seed=2))
    u = np.random.default_rng(3).random((3, 500))
    a = fastpath.bell_sample_batch(states, 4, u)
    b = fastpath.bell_sample_batch_numpy(states, 4, u)
    np.testing.assert_array_equal(a, b)


def test_bell_sample_distribution_matches_doubled_state():
    from jbmvqe.statevector import StateVector
    circuit = AnsatzCircuit(4, 2, 2)
    thetas = theta_matrix(circuit, 1, seed=4)
    states = batch_states(circuit, thetas)
    u = np.random.default_rng(5).random((1, 400_000))
    outcomes = fastpath.bell_sample_batch(states, 4, u)[0]
    probs = doubled_bell_state(
        StateVector(4, states[0].astype(np.complex128))).probabilities()
    counts = np.bincount(outcomes, minlength=256) / 400_000
    assert np.abs(counts - probs).max() < 2.5e-3


def test_bell_abs_table_and_sparse_agree(h2):
    ops = [t.operator for t in h2.terms]
    circuit = AnsatzCircuit(4, 2, 2)
    states = batch_states(circuit, theta_matrix(circuit, 5, seed=6))
    u = np.random.default_rng(7).random((5, 1111))
    outcomes = fastpath.bell_sample_batch(states, 4, u)
    table = fastpath.bell_eig_table(ops, 4)
    a = fastpath.bell_abs_batch(outcomes, ops, 4, 1111, table=table)
    b = fastpath.bell_abs_batch(outcomes, ops, 4, 1111)
    np.testing.assert_allclose(a, b, atol=1e-6)
    # and both match the scalar estimator row by row
    for r in range(5):
        np.testing.assert_allclose(
            a[r], batch_abs_estimates(outcomes[r], ops), atol=1e-12)


def test_bell_eig_table_memory_cap():
    ops = [t.operator for t in load_fixture("h5plus").terms]
    assert fastpath.bell_eig_table(ops, 10) is None \
        or (1 << 20) * len(ops) <= fastpath.BELL_TABLE_MAX_ENTRIES


def test_projective_backends_identical(h2):
    groups = group_qwc_greedy(h2)
    circuit = AnsatzCircuit(4, 2, 2)
    states = batch_states(circuit, theta_matrix(circuit, 7, seed=8))
    seeds = list(range(100, 100 + len(groups)))
    a = fastpath.projective_batch(states, h2, groups, 997, seeds)
    b = fastpath.projective_batch_numpy(states, h2, groups, 997, seeds)
    np.testing.assert_array_equal(a, b)


def test_projective_estimates_converge(h2):
    groups = group_qwc_greedy(h2)
    circuit = AnsatzCircuit(4, 2, 2)
    thetas = theta_matrix(circuit, 3, seed=9)
    states = batch_states(circuit, thetas)
    vals = fastpath.projective_batch(states, h2, groups, 300_000,
                                     list(range(len(groups))))
    for r in range(3):
        psi = apply_ansatz(circuit, thetas[r])
        exact = np.array([exact_expectation(psi, t.operator)
                          for t in h2.terms])
        np.testing.assert_allclose(vals[r], exact, atol=8e-3)


def test_projective_deterministic(h2):
    groups = group_qwc_greedy(h2)
    circuit = AnsatzCircuit(4, 2, 2)
    states = batch_states(circuit, theta_matrix(circuit, 2, seed=10))
    a = fastpath.projective_batch(states, h2, groups, 100, [1, 2, 3, 4, 5])
    b = fastpath.projective_batch(states, h2, groups, 100, [1, 2, 3, 4, 5])
    np.testing.assert_array_equal(a, b)
    c = fastpath.projective_batch(states, h2, groups, 100, [9, 2, 3, 4, 5])
    assert not np.array_equal(a, c)
