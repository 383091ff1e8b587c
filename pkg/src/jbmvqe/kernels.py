"""Numerical hot kernels, with numba-compiled and pure-numpy variants.

Both variants implement identical contracts and are exercised by the
benchmark suite. Set the environment variable ``JBMVQE_FORCE_NUMPY=1``
before import to select the numpy implementations (also the automatic
fallback when numba is unavailable).

State vectors are 1-D complex128 arrays of length 2**n_qubits, modified
in place by the gate kernels. Qubit q corresponds to bit q of the basis
state index (qubit 0 = least significant bit).
"""

import os

import numpy as np

_SQRT1_2 = 1.0 / np.sqrt(2.0)


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def _pair_indices(n_states, qubit):
    idx = np.arange(n_states)
    i0 = idx[(idx >> qubit) & 1 == 0]
    return i0, i0 | (1 << qubit)


def apply_ry_numpy(psi, qubit, theta):
    """In-place Ry(theta) = exp(-i theta Y / 2) on one qubit."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    i0, i1 = _pair_indices(psi.shape[0], qubit)
    p0, p1 = psi[i0].copy(), psi[i1].copy()
    psi[i0] = c * p0 - s * p1
    psi[i1] = s * p0 + c * p1


def apply_h_numpy(psi, qubit):
    """In-place Hadamard on one qubit."""
    i0, i1 = _pair_indices(psi.shape[0], qubit)
    p0, p1 = psi[i0].copy(), psi[i1].copy()
    psi[i0] = _SQRT1_2 * (p0 + p1)
    psi[i1] = _SQRT1_2 * (p0 - p1)


def apply_sdg_numpy(psi, qubit):
    """In-place S-dagger (|1> picks up -i) on one qubit."""
    idx = np.arange(psi.shape[0])
    psi[(idx >> qubit) & 1 == 1] *= -1j


def apply_cnot_numpy(psi, control, target):
    """In-place CNOT; flips `target` where `control` is 1."""
    idx = np.arange(psi.shape[0])
    sel = idx[((idx >> control) & 1 == 1) & ((idx >> target) & 1 == 0)]
    flp = sel | (1 << target)
    psi[sel], psi[flp] = psi[flp].copy(), psi[sel].copy()


def parity_numpy(values, mask):
    """Parity (0 or 1) of popcount(values & mask), elementwise."""
    v = np.asarray(values, dtype=np.uint64) & np.uint64(mask)
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> np.uint64(shift)
    return (v & np.uint64(1)).astype(np.int64)


def expectation_pauli_numpy(psi, x_mask, zy_mask, y_count):
    """<psi| P |psi> for the Pauli with the given masks (real output).

    P|k> = i**y_count * (-1)**popcount(k & zy_mask) |k ^ x_mask>.
    """
    idx = np.arange(psi.shape[0])
    signs = 1.0 - 2.0 * parity_numpy(idx, zy_mask)
    val = np.vdot(psi[idx ^ x_mask], signs * psi) * (1j ** y_count)
    return float(val.real)


def sample_outcomes_numpy(probs, uniforms):
    """Basis-state indices sampled from `probs` using external U[0,1) draws."""
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    return np.searchsorted(cdf, uniforms, side="right").astype(np.int64)


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

_FORCE_NUMPY = os.environ.get("JBMVQE_FORCE_NUMPY", "") not in ("", "0")

if not _FORCE_NUMPY:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _FORCE_NUMPY = True

if not _FORCE_NUMPY:

    @njit(cache=True)
    def apply_ry_numba(psi, qubit, theta):
        c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
        step = 1 << qubit
        for base in range(0, psi.shape[0], 2 * step):
            for off in range(base, base + step):
                p0, p1 = psi[off], psi[off + step]
                psi[off] = c * p0 - s * p1
                psi[off + step] = s * p0 + c * p1

    @njit(cache=True)
    def apply_h_numba(psi, qubit):
        step = 1 << qubit
        for base in range(0, psi.shape[0], 2 * step):
            for off in range(base, base + step):
                p0, p1 = psi[off], psi[off + step]
                psi[off] = _SQRT1_2 * (p0 + p1)
                psi[off + step] = _SQRT1_2 * (p0 - p1)

    @njit(cache=True)
    def apply_sdg_numba(psi, qubit):
        step = 1 << qubit
        for base in range(0, psi.shape[0], 2 * step):
            for off in range(base, base + step):
                psi[off + step] *= -1j

    @njit(cache=True)
    def apply_cnot_numba(psi, control, target):
        cbit, tbit = 1 << control, 1 << target
        for k in range(psi.shape[0]):
            if (k & cbit) and not (k & tbit):
                j = k | tbit
                psi[k], psi[j] = psi[j], psi[k]

    @njit(cache=True)
    def _parity64(v):
        v ^= v >> 32
        v ^= v >> 16
        v ^= v >> 8
        v ^= v >> 4
        v ^= v >> 2
        v ^= v >> 1
        return v & 1

    @njit(cache=True)
    def parity_numba(values, mask):
        out = np.empty(values.shape[0], dtype=np.int64)
        for i in range(values.shape[0]):
            out[i] = _parity64(values[i] & mask)
        return out

    @njit(cache=True)
    def expectation_pauli_numba(psi, x_mask, zy_mask, y_count):
        acc = 0.0 + 0.0j
        for k in range(psi.shape[0]):
            sign = 1.0 - 2.0 * _parity64(k & zy_mask)
            acc += np.conj(psi[k ^ x_mask]) * sign * psi[k]
        return (acc * 1j ** y_count).real

    @njit(cache=True)
    def sample_outcomes_numba(probs, uniforms):
        cdf = np.cumsum(probs)
        cdf[-1] = 1.0
        return np.searchsorted(cdf, uniforms, side="right").astype(np.int64)

    def parity_numba_wrapped(values, mask):
        return parity_numba(np.asarray(values, dtype=np.int64), mask)

    apply_ry = apply_ry_numba
    apply_h = apply_h_numba
    apply_sdg = apply_sdg_numba
    apply_cnot = apply_cnot_numba
    parity = parity_numba_wrapped
    expectation_pauli = expectation_pauli_numba
    sample_outcomes = sample_outcomes_numba
    BACKEND = "numba"
else:
    apply_ry = apply_ry_numpy
    apply_h = apply_h_numpy
    apply_sdg = apply_sdg_numpy
    apply_cnot = apply_cnot_numpy
    parity = parity_numpy
    expectation_pauli = expectation_pauli_numpy
    sample_outcomes = sample_outcomes_numpy
    BACKEND = "numpy"
