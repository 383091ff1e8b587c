"""Batched shot-mode pipelines for the optimizer inner loop.

A gradient step evaluates the same circuit family at B = 2 N_theta + 1
parameter points. Sampling those points one by one wastes most of the
time on per-call overhead, so this module batches the whole block:

  * ``build_states_batch``     -- all B ansatz states as one (B, 2**n)
    real float64 array (the ansatz uses only Ry and CNOT on a real
    reference state, so states stay real);
  * ``bell_sample_batch``      -- Bell-basis outcomes for every row of
    the doubled register, with the outer product, transversal
    CNOT+H transform, cumulative distribution and binary-search
    sampling fused into one kernel;
  * ``bell_abs_batch``         -- per-term |<P>| estimates for every
    row from the sampled outcomes (sparse counts x eigenvalue table);
  * ``projective_batch``       -- grouped projective (conventional)
    per-term estimates for every row.

Numba compiles the two state-heavy kernels; pure-numpy equivalents are
selected by ``JBMVQE_FORCE_NUMPY=1`` (see :mod:`jbmvqe.kernels`).
Estimates computed here agree with the scalar paths in
:mod:`jbmvqe.bell` / :mod:`jbmvqe.grouping` in distribution; batched
runs draw one uniform block per batch instead of one seed per circuit,
so they are deterministic per seed but not shot-for-shot identical to
the scalar API.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .kernels import _FORCE_NUMPY, _SQRT1_2

# ---------------------------------------------------------------------------
# ansatz states, batched
# ---------------------------------------------------------------------------


def _block_perm_masks(a, b):
    """Index permutation of CNOT(a -> b) as (control_bit, target_bit)."""
    return 1 << a, 1 << b


def build_states_batch_numpy(thetas, pairs, n_qubits, depth, ref_index):
    thetas = np.asarray(thetas, dtype=np.float64)
    batch = thetas.shape[0]
    dim = 1 << n_qubits
    psi = np.zeros((batch, dim), dtype=np.float64)
    psi[:, ref_index] = 1.0
    idx = np.arange(dim)
    k = 0
    for _ in range(depth):
        for a, b in pairs:
            abit, bbit = 1 << a, 1 << b
            perm_ab = np.where(idx & abit, idx ^ bbit, idx)
            perm_ba = np.where(idx & bbit, idx ^ abit, idx)
            theta = thetas[:, k]
            c = np.cos(theta / 2.0)[:, None]
            s = np.sin(theta / 2.0)[:, None]
            psi = psi[:, perm_ab]
            _ry_rows_real(psi, a, c, s, n_qubits)
            psi = psi[:, perm_ba]
            _ry_rows_real(psi, a, c, -s, n_qubits)
            psi = psi[:, perm_ab]
            k += 1
    return psi


def _ry_rows_real(psi, qubit, c, s, n_qubits):
    """In-place batched Ry with per-row cos/sin columns (real states)."""
    batch = psi.shape[0]
    view = psi.reshape(batch, -1, 2, 1 << qubit)
    p0 = view[:, :, 0, :].copy()
    p1 = view[:, :, 1, :].copy()
    view[:, :, 0, :] = c[:, None] * p0 - s[:, None] * p1
    view[:, :, 1, :] = s[:, None] * p0 + c[:, None] * p1


# ---------------------------------------------------------------------------
# Bell sampling, batched
# ---------------------------------------------------------------------------


def bell_sample_batch_numpy(states, n_qubits, uniforms):
    states = np.asarray(states, dtype=np.float64)
    batch, dim = states.shape
    if dim != 1 << n_qubits:
        raise ValueError("state dimension does not match qubit count")
    doubled_dim = dim * dim
    outcomes = np.empty(uniforms.shape, dtype=np.int64)
    idx = np.arange(doubled_dim)
    perms = []
    for q in range(n_qubits):
        cbit, tbit = 1 << q, 1 << (n_qubits + q)
        perms.append(np.where(idx & cbit, idx ^ tbit, idx))
    for row in range(batch):
        # |i>_A |j>_B amplitude = psi_i psi_j; register A in the low bits
        psi2 = np.outer(states[row], states[row]).reshape(-1)
        for q in range(n_qubits):
            psi2 = psi2[perms[q]]
            view = psi2.reshape(-1, 2, 1 << q)
            p0 = view[:, 0, :].copy()
            p1 = view[:, 1, :].copy()
            view[:, 0, :] = _SQRT1_2 * (p0 + p1)
            view[:, 1, :] = _SQRT1_2 * (p0 - p1)
        cdf = np.cumsum(psi2 * psi2)
        cdf[-1] = 1.0
        outcomes[row] = np.searchsorted(cdf, uniforms[row], side="right")
    return outcomes


if not _FORCE_NUMPY:
    from numba import njit

    @njit(cache=True)
    def _build_states_batch_numba(thetas, pairs, n_qubits, depth, ref_index):
        batch = thetas.shape[0]
        dim = 1 << n_qubits
        psi = np.zeros((batch, dim), dtype=np.float64)
        for row in range(batch):
            psi[row, ref_index] = 1.0
            k = 0
            for _ in range(depth):
                for p in range(pairs.shape[0]):
                    a, b = pairs[p, 0], pairs[p, 1]
                    abit, bbit = 1 << a, 1 << b
                    c = np.cos(thetas[row, k] / 2.0)
                    s = np.sin(thetas[row, k] / 2.0)
                    _cnot_row(psi[row], abit, bbit)
                    _ry_row(psi[row], abit, c, s)
                    _cnot_row(psi[row], bbit, abit)
                    _ry_row(psi[row], abit, c, -s)
                    _cnot_row(psi[row], abit, bbit)
                    k += 1
        return psi

    @njit(cache=True)
    def _cnot_row(psi, cbit, tbit):
        for k in range(psi.shape[0]):
            if (k & cbit) and not (k & tbit):
                j = k | tbit
                psi[k], psi[j] = psi[j], psi[k]

    @njit(cache=True)
    def _ry_row(psi, qbit, c, s):
        for base in range(0, psi.shape[0], 2 * qbit):
            for off in range(base, base + qbit):
                p0, p1 = psi[off], psi[off + qbit]
                psi[off] = c * p0 - s * p1
                psi[off + qbit] = s * p0 + c * p1

    @njit(cache=True)
    def _bell_sample_batch_numba(states, n_qubits, uniforms):
        batch, dim = states.shape
        doubled_dim = dim * dim
        shots = uniforms.shape[1]
        outcomes = np.empty((batch, shots), dtype=np.int64)
        psi2 = np.empty(doubled_dim, dtype=np.float64)
        cdf = np.empty(doubled_dim, dtype=np.float64)
        for row in range(batch):
            for j in range(dim):
                vj = states[row, j]
                base = j * dim
                for i in range(dim):
                    psi2[base + i] = states[row, i] * vj
            # Per qubit q: CNOT(q -> n+q) then H(q), fused into one pass
            # over the indices with both bits clear. With a0..a3 the
            # amplitudes at (q, n+q) = (0,0), (1,0), (0,1), (1,1), the
            # CNOT swaps a1 <-> a3 and the Hadamard mixes along bit q.
            for q in range(n_qubits):
                cbit = 1 << q
                tbit = 1 << (n_qubits + q)
                for b2 in range(0, doubled_dim, 2 * tbit):
                    for b1 in range(b2, b2 + tbit, 2 * cbit):
                        for i0 in range(b1, b1 + cbit):
                            i1 = i0 | cbit
                            i2 = i0 | tbit
                            i3 = i2 | cbit
                            a0, a1 = psi2[i0], psi2[i1]
                            a2, a3 = psi2[i2], psi2[i3]
                            psi2[i0] = _SQRT1_2 * (a0 + a3)
                            psi2[i1] = _SQRT1_2 * (a0 - a3)
                            psi2[i2] = _SQRT1_2 * (a2 + a1)
                            psi2[i3] = _SQRT1_2 * (a2 - a1)
            acc = 0.0
            for k in range(doubled_dim):
                acc += psi2[k] * psi2[k]
                cdf[k] = acc
            cdf[doubled_dim - 1] = 1.0
            for k in range(shots):
                u = uniforms[row, k]
                lo, hi = 0, doubled_dim - 1
                while lo < hi:
                    mid = (lo + hi) >> 1
                    if cdf[mid] > u:
                        hi = mid
                    else:
                        lo = mid + 1
                outcomes[row, k] = lo
        return outcomes

    @njit(cache=True)
    def _bell_abs_table_numba(outcomes, eig, shots):
        """Per-row abs estimates from a (doubled_dim, M) eigenvalue table."""
        batch = outcomes.shape[0]
        n_terms = eig.shape[1]
        out = np.empty((batch, n_terms), dtype=np.float64)
        acc = np.empty(n_terms, dtype=np.int64)
        srt = np.empty(shots, dtype=np.int64)
        for row in range(batch):
            srt[:] = outcomes[row]
            srt.sort()
            acc[:] = 0
            i = 0
            while i < shots:
                d = srt[i]
                j = i + 1
                while j < shots and srt[j] == d:
                    j += 1
                cnt = j - i
                for t in range(n_terms):
                    acc[t] += cnt * eig[d, t]
                i = j
            for t in range(n_terms):
                mean = acc[t] / shots
                out[row, t] = np.sqrt(mean) if mean > 0.0 else 0.0
        return out

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
    def _proj_group_numba(states, basis_codes, uniforms, supports):
        """One measurement group: rotate, sample, per-member estimates.

        basis_codes[q]: 0 = no rotation (I/Z), 1 = X (H), 2 = Y (Sdg, H).
        supports[j]: z-parity mask of member j in the rotated basis.
        Returns (B, n_members) estimate matrix.
        """
        batch, dim = states.shape
        shots = uniforms.shape[1]
        n_members = supports.shape[0]
        est = np.empty((batch, n_members), dtype=np.float64)
        amp = np.empty(dim, dtype=np.complex128)
        cdf = np.empty(dim, dtype=np.float64)
        counts = np.empty(dim, dtype=np.int64)
        eigs = np.empty((n_members, dim), dtype=np.float64)
        for j in range(n_members):
            for k in range(dim):
                eigs[j, k] = 1.0 - 2.0 * _parity64(k & supports[j])
        for row in range(batch):
            for k in range(dim):
                amp[k] = states[row, k]
            for q in range(basis_codes.shape[0]):
                code = basis_codes[q]
                if code == 0:
                    continue
                qbit = 1 << q
                for base in range(0, dim, 2 * qbit):
                    for off in range(base, base + qbit):
                        p0, p1 = amp[off], amp[off + qbit]
                        if code == 2:
                            p1 *= -1j
                        amp[off] = _SQRT1_2 * (p0 + p1)
                        amp[off + qbit] = _SQRT1_2 * (p0 - p1)
            acc = 0.0
            for k in range(dim):
                a = amp[k]
                acc += a.real * a.real + a.imag * a.imag
                cdf[k] = acc
            cdf[dim - 1] = 1.0
            for k in range(dim):
                counts[k] = 0
            for k in range(shots):
                u = uniforms[row, k]
                lo, hi = 0, dim - 1
                while lo < hi:
                    mid = (lo + hi) >> 1
                    if cdf[mid] > u:
                        hi = mid
                    else:
                        lo = mid + 1
                counts[lo] += 1
            for j in range(n_members):
                s = 0.0
                for k in range(dim):
                    if counts[k] != 0:
                        s += counts[k] * eigs[j, k]
                est[row, j] = s / shots
        return est

    def build_states_batch(thetas, pairs, n_qubits, depth, ref_index):
        return _build_states_batch_numba(
            np.ascontiguousarray(thetas, dtype=np.float64),
            np.asarray(pairs, dtype=np.int64),
            n_qubits, depth, ref_index)

    def bell_sample_batch(states, n_qubits, uniforms):
        return _bell_sample_batch_numba(
            np.ascontiguousarray(states, dtype=np.float64),
            n_qubits,
            np.ascontiguousarray(uniforms, dtype=np.float64))
else:
    def build_states_batch(thetas, pairs, n_qubits, depth, ref_index):
        return build_states_batch_numpy(
            thetas, np.asarray(pairs, dtype=np.int64),
            n_qubits, depth, ref_index)

    bell_sample_batch = bell_sample_batch_numpy


# ---------------------------------------------------------------------------
# estimate assembly (shared between backends)
# ---------------------------------------------------------------------------


def _parity_of(values, mask):
    return (np.bitwise_count(values & np.int64(mask)) & 1).astype(np.int8)


# Cap on doubled_dim * n_terms for the dense Bell eigenvalue table; above
# it the sparse unique-outcome path is used instead.
BELL_TABLE_MAX_ENTRIES = 10 ** 8


def bell_eig_table(operators, n_qubits):
    """Dense (4**n, M) int8 table of Bell-basis eigenvalues of P (x) P,
    or None when it would exceed the memory cap.

    Outcome s carries the X-basis bit of qubit q at position q and the
    Z-basis bit at position n + q; the eigenvalue of P (x) P is
    (-1) ** (popcount(s & (x_mask | z_mask << n)) + y_count).
    """
    doubled_dim = 1 << (2 * n_qubits)
    if doubled_dim * len(operators) > BELL_TABLE_MAX_ENTRIES:
        return None
    idx = np.arange(doubled_dim, dtype=np.int64)
    table = np.empty((doubled_dim, len(operators)), dtype=np.int8)
    for j, op in enumerate(operators):
        mask = op.x_mask | (op.z_mask << n_qubits)
        par = _parity_of(idx, mask)
        if op.y_count & 1:
            par ^= 1
        table[:, j] = 1 - 2 * par
    return table


def bell_abs_batch(outcomes, operators, n_qubits, shots, table=None):
    """Per-row, per-term |<P>| estimates from Bell outcomes.

    outcomes: (B, shots) int64 Bell basis indices; `table` an optional
    precomputed ``bell_eig_table``. Returns (B, M) float64 estimates
    sqrt(max{0, mean eigenvalue}).
    """
    if table is not None and not _FORCE_NUMPY:
        return _bell_abs_table_numba(
            np.ascontiguousarray(outcomes, dtype=np.int64), table, shots)
    batch = outcomes.shape[0]
    flat = outcomes.reshape(-1)
    unique, inverse = np.unique(flat, return_inverse=True)
    rows = np.repeat(np.arange(batch, dtype=np.int64), shots)
    counts = sp.csr_matrix(
        (np.ones(flat.shape[0], dtype=np.float32), (rows, inverse)),
        shape=(batch, unique.shape[0]))
    eig = np.empty((unique.shape[0], len(operators)), dtype=np.float32)
    for j, op in enumerate(operators):
        mask = op.x_mask | (op.z_mask << n_qubits)
        par = _parity_of(unique, mask)
        if op.y_count & 1:
            par ^= 1
        eig[:, j] = 1.0 - 2.0 * par
    means = np.asarray(counts @ eig, dtype=np.float64) / shots
    return np.sqrt(np.maximum(0.0, means))


def projective_batch(states, h, groups, shots, seeds):
    """Grouped projective per-term estimates for every state row.

    states: (B, 2**n) real float64; seeds: one integer per group, in
    group order. Returns (B, M) float64 signed estimates.
    """
    states = np.ascontiguousarray(states, dtype=np.float64)
    if not _FORCE_NUMPY:
        vals = np.empty((states.shape[0], term_count_of(h)),
                        dtype=np.float64)
        for g_idx, group in enumerate(groups):
            codes = np.array(
                [1 if c == "X" else 2 if c == "Y" else 0
                 for c in group.basis], dtype=np.int64)
            supports = np.array(
                [h.terms[j].operator.x_mask | h.terms[j].operator.z_mask
                 for j in group.members], dtype=np.int64)
            rng = np.random.Generator(np.random.PCG64(seeds[g_idx]))
            uniforms = rng.random((states.shape[0], shots))
            est = _proj_group_numba(states, codes, uniforms, supports)
            for col, j in enumerate(group.members):
                vals[:, j] = est[:, col]
        return vals
    return projective_batch_numpy(states, h, groups, shots, seeds)


def projective_batch_numpy(states, h, groups, shots, seeds):
    states = np.asarray(states, dtype=np.float64)
    batch, dim = states.shape
    n_qubits = h.n_qubits
    vals = np.empty((batch, term_count_of(h)), dtype=np.float64)
    row_base = np.arange(batch, dtype=np.int64)[:, None]
    for g_idx, group in enumerate(groups):
        psi = _rotate_batch(states, group.basis)
        probs = (psi * psi.conj()).real if np.iscomplexobj(psi) \
            else psi * psi
        cdf = np.minimum(np.cumsum(probs, axis=1), 1.0)
        cdf[:, -1] = 1.0
        rng = np.random.Generator(np.random.PCG64(seeds[g_idx]))
        u = rng.random((batch, shots))
        flat_cdf = (cdf + row_base).reshape(-1)
        flat_u = (u + row_base).reshape(-1)
        pos = np.searchsorted(flat_cdf, flat_u, side="right")
        outcomes = pos - (np.repeat(np.arange(batch), shots) * dim)
        counts = np.bincount(
            np.repeat(np.arange(batch, dtype=np.int64), shots) * dim
            + outcomes,
            minlength=batch * dim).reshape(batch, dim).astype(np.float64)
        basis_idx = np.arange(dim, dtype=np.int64)
        for j in group.members:
            op = h.terms[j].operator
            support = op.x_mask | op.z_mask
            eig = 1.0 - 2.0 * _parity_of(basis_idx, support)
            vals[:, j] = (counts @ eig) / shots
    return vals


def term_count_of(h):
    return len(h.terms)


def _rotate_batch(states, basis):
    """Apply the measurement-basis rotation to every row; qubit q's
    letter is basis[q] (X -> H, Y -> Sdg then H, else identity)."""
    psi = states
    if "Y" in basis:
        psi = psi.astype(np.complex128)
    else:
        psi = psi.copy()
    batch = psi.shape[0]
    for q, letter in enumerate(basis):
        if letter not in ("X", "Y"):
            continue
        view = psi.reshape(batch, -1, 2, 1 << q)
        if letter == "Y":
            view[:, :, 1, :] *= -1j
        p0 = view[:, :, 0, :].copy()
        p1 = view[:, :, 1, :].copy()
        view[:, :, 0, :] = _SQRT1_2 * (p0 + p1)
        view[:, :, 1, :] = _SQRT1_2 * (p0 - p1)
    return psi
