"""Numba and numpy kernel variants: identical contracts, shared oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jbmvqe import kernels

PAIRS = [
    (kernels.apply_ry_numpy, "ry"),
    (kernels.apply_h_numpy, "h"),
    (kernels.apply_sdg_numpy, "sdg"),
    (kernels.apply_cnot_numpy, "cnot"),
]


def random_state(n_qubits, seed):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=2 ** n_qubits) + 1j * rng.normal(size=2 ** n_qubits)
    return (amps / np.linalg.norm(amps)).astype(np.complex128)


# dense-matrix oracles -------------------------------------------------------

H1 = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
SDG = np.diag([1.0, -1.0j])


def ry_matrix(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]])


def lift(gate, qubit, n_qubits):
    """Embed a 1-qubit gate; qubit 0 = least significant bit."""
    mat = np.array([[1.0]])
    for q in range(n_qubits):
        mat = np.kron(gate if q == qubit else np.eye(2), mat)
    return mat


def cnot_matrix(control, target, n_qubits):
    dim = 2 ** n_qubits
    mat = np.zeros((dim, dim))
    for k in range(dim):
        j = k ^ (1 << target) if (k >> control) & 1 else k
        mat[j, k] = 1.0
    return mat


@pytest.mark.parametrize("qubit", [0, 1, 2])
@pytest.mark.parametrize("impl", [kernels.apply_ry, kernels.apply_ry_numpy])
def test_ry_against_matrix(impl, qubit):
    psi = random_state(3, seed=qubit)
    expected = lift(ry_matrix(0.7), qubit, 3) @ psi
    out = psi.copy()
    impl(out, qubit, 0.7)
    np.testing.assert_allclose(out, expected, atol=1e-12)


@pytest.mark.parametrize("qubit", [0, 1, 2])
@pytest.mark.parametrize("impl,gate", [
    (kernels.apply_h, H1), (kernels.apply_h_numpy, H1),
    (kernels.apply_sdg, SDG), (kernels.apply_sdg_numpy, SDG),
])
def test_h_sdg_against_matrix(impl, gate, qubit):
    psi = random_state(3, seed=10 + qubit)
    expected = lift(gate, qubit, 3) @ psi
    out = psi.copy()
    impl(out, qubit)
    np.testing.assert_allclose(out, expected, atol=1e-12)


@pytest.mark.parametrize("control,target", [(0, 1), (1, 0), (0, 2), (2, 1)])
@pytest.mark.parametrize("impl",
                         [kernels.apply_cnot, kernels.apply_cnot_numpy])
def test_cnot_against_matrix(impl, control, target):
    psi = random_state(3, seed=20 + control * 3 + target)
    expected = cnot_matrix(control, target, 3) @ psi
    out = psi.copy()
    impl(out, control, target)
    np.testing.assert_allclose(out, expected, atol=1e-12)


def test_backend_flag_exported():
    assert kernels.BACKEND in ("numba", "numpy")


def test_backends_agree_on_random_circuit():
    """Interleave all gates; selected backend must equal pure numpy."""
    rng = np.random.default_rng(5)
    a = random_state(4, seed=99)
    b = a.copy()
    for _ in range(25):
        q = int(rng.integers(4))
        gate = int(rng.integers(4))
        if gate == 0:
            theta = float(rng.normal())
            kernels.apply_ry(a, q, theta)
            kernels.apply_ry_numpy(b, q, theta)
        elif gate == 1:
            kernels.apply_h(a, q)
            kernels.apply_h_numpy(b, q)
        elif gate == 2:
            kernels.apply_sdg(a, q)
            kernels.apply_sdg_numpy(b, q)
        else:
            t = int(rng.integers(4))
            if t == q:
                continue
            kernels.apply_cnot(a, q, t)
            kernels.apply_cnot_numpy(b, q, t)
    np.testing.assert_allclose(a, b, atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=4),
       st.integers(min_value=0, max_value=3),
       st.floats(min_value=-7, max_value=7),
       st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_gates_preserve_norm(n_qubits, qubit, theta, seed):
    qubit %= n_qubits
    psi = random_state(n_qubits, seed)
    for apply_gate in (lambda p: kernels.apply_ry(p, qubit, theta),
                       lambda p: kernels.apply_h(p, qubit),
                       lambda p: kernels.apply_sdg(p, qubit)):
        out = psi.copy()
        apply_gate(out)
        assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-12)


# parity / expectation -------------------------------------------------------


@given(st.lists(st.integers(min_value=0, max_value=2 ** 40), min_size=1,
                max_size=32),
       st.integers(min_value=0, max_value=2 ** 40))
def test_parity_matches_popcount(values, mask):
    vals = np.array(values, dtype=np.int64)
    expected = np.array([bin(v & mask).count("1") % 2 for v in values])
    np.testing.assert_array_equal(kernels.parity(vals, mask), expected)
    np.testing.assert_array_equal(kernels.parity_numpy(vals, mask), expected)


def dense_pauli(letters):
    ops = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]),
           "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1])}
    mat = np.array([[1.0]])
    for c in letters:  # qubit 0 = least significant bit = leftmost letter
        mat = np.kron(ops[c], mat)
    return mat


@pytest.mark.parametrize("letters", ["XII", "IYI", "IIZ", "XYZ", "YYI",
                                     "ZXY", "YYY"])
def test_expectation_pauli_against_dense(letters):
    from jbmvqe.pauli import PauliOperator
    op = PauliOperator(letters)
    psi = random_state(3, seed=hash(letters) % 1000)
    expected = np.vdot(psi, dense_pauli(letters) @ psi).real
    for impl in (kernels.expectation_pauli, kernels.expectation_pauli_numpy):
        got = impl(psi, op.x_mask, op.z_mask, op.y_count)
        assert got == pytest.approx(expected, abs=1e-12)


# sampling -------------------------------------------------------------------


def test_sample_outcomes_matches_cdf_inversion():
    probs = np.array([0.1, 0.0, 0.4, 0.5])
    uniforms = np.array([0.0, 0.05, 0.1, 0.4999, 0.5, 0.99, 0.999999])
    expected = np.array([0, 0, 2, 2, 3, 3, 3])
    for impl in (kernels.sample_outcomes, kernels.sample_outcomes_numpy):
        np.testing.assert_array_equal(impl(probs, uniforms), expected)


def test_sample_outcomes_empirical_frequencies():
    probs = np.array([0.2, 0.3, 0.5])
    u = np.random.default_rng(0).random(200_000)
    counts = np.bincount(kernels.sample_outcomes(probs, u), minlength=3)
    np.testing.assert_allclose(counts / 200_000, probs, atol=5e-3)
