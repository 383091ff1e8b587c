"""Second quantization and Jordan-Wigner mapping.

Spin orbitals are interleaved: spin orbital 2p is spatial orbital p with
alpha spin, 2p+1 the same orbital with beta spin. Qubit q hosts spin
orbital q; qubit 0 is the least significant bit, so the reference
determinant fills the lowest-index qubits.
"""

import numpy as np

# single-qubit Pauli products: (left, right) -> (phase, result)
_MUL = {}
for _a in "IXYZ":
    _MUL[("I", _a)] = (1.0, _a)
    _MUL[(_a, "I")] = (1.0, _a)
    _MUL[(_a, _a)] = (1.0, "I")
_MUL[("X", "Y")] = (1j, "Z")
_MUL[("Y", "X")] = (-1j, "Z")
_MUL[("Y", "Z")] = (1j, "X")
_MUL[("Z", "Y")] = (-1j, "X")
_MUL[("Z", "X")] = (1j, "Y")
_MUL[("X", "Z")] = (-1j, "Y")


def multiply_terms(ops_a, ops_b):
    """Multiply two equal-length Pauli letter tuples; returns (phase, tuple)."""
    phase = 1.0 + 0j
    out = []
    for la, lb in zip(ops_a, ops_b):
        ph, lc = _MUL[(la, lb)]
        phase *= ph
        out.append(lc)
    return phase, tuple(out)


class PauliSum:
    """Sparse sum of Pauli strings with complex coefficients."""

    def __init__(self, n_qubits, terms=None):
        self.n_qubits = n_qubits
        self.terms = dict(terms or {})

    @classmethod
    def identity(cls, n_qubits, coeff=1.0):
        return cls(n_qubits, {("I",) * n_qubits: coeff})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0.0) + v
        return PauliSum(self.n_qubits, out)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return PauliSum(self.n_qubits,
                            {k: v * other for k, v in self.terms.items()})
        out = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                ph, kc = multiply_terms(ka, kb)
                out[kc] = out.get(kc, 0.0) + va * vb * ph
        return PauliSum(self.n_qubits, out)

    __rmul__ = __mul__

    def compressed(self, tol=1e-12):
        return PauliSum(self.n_qubits,
                        {k: v for k, v in self.terms.items() if abs(v) > tol})


def jw_annihilation(p, n_qubits):
    """Jordan-Wigner image of the annihilation operator on spin orbital p."""
    zs = ["Z"] * p
    x_str = tuple(zs + ["X"] + ["I"] * (n_qubits - p - 1))
    y_str = tuple(zs + ["Y"] + ["I"] * (n_qubits - p - 1))
    return PauliSum(n_qubits, {x_str: 0.5, y_str: 0.5j})


def jw_creation(p, n_qubits):
    zs = ["Z"] * p
    x_str = tuple(zs + ["X"] + ["I"] * (n_qubits - p - 1))
    y_str = tuple(zs + ["Y"] + ["I"] * (n_qubits - p - 1))
    return PauliSum(n_qubits, {x_str: 0.5, y_str: -0.5j})


def spin_orbital_integrals(h_mo, eri_mo):
    """Expand spatial-orbital integrals into interleaved spin orbitals.

    Returns (h1, g2) with g2 in physicist notation <ij|kl>.
    """
    n = h_mo.shape[0]
    ns = 2 * n
    h1 = np.zeros((ns, ns))
    g2 = np.zeros((ns, ns, ns, ns))
    for p in range(ns):
        for q in range(ns):
            if p % 2 == q % 2:
                h1[p, q] = h_mo[p // 2, q // 2]
    for i in range(ns):
        for j in range(ns):
            for k in range(ns):
                for l in range(ns):
                    if i % 2 == k % 2 and j % 2 == l % 2:
                        # <ij|kl> = (ik|jl) in chemist notation
                        g2[i, j, k, l] = eri_mo[i // 2, k // 2, j // 2, l // 2]
    return h1, g2


def fermionic_to_qubit(h1, g2, constant):
    """Map H = const + sum h1[p,q] a†p aq + 1/2 sum <pq|rs> a†p a†q as ar."""
    ns = h1.shape[0]
    a = [jw_annihilation(p, ns) for p in range(ns)]
    ad = [jw_creation(p, ns) for p in range(ns)]
    total = PauliSum.identity(ns, complex(constant))
    for p in range(ns):
        for q in range(ns):
            if abs(h1[p, q]) > 1e-13:
                total = total + h1[p, q] * (ad[p] * a[q])
    for p in range(ns):
        for q in range(ns):
            if p == q:
                continue
            for r in range(ns):
                for s in range(ns):
                    if r == s:
                        continue
                    val = g2[p, q, r, s]
                    if abs(val) > 1e-13:
                        total = total + 0.5 * val * (ad[p] * (ad[q] * (a[s] * a[r])))
            total = total.compressed()
    return total.compressed()


def active_space_reduction(h_mo, eri_mo, e_nuc, n_frozen, n_active):
    """Freeze the lowest n_frozen doubly-occupied MOs, keep n_active orbitals."""
    act = slice(n_frozen, n_frozen + n_active)
    core = range(n_frozen)
    e_core = e_nuc
    for i in core:
        e_core += 2.0 * h_mo[i, i]
        for j in core:
            e_core += 2.0 * eri_mo[i, i, j, j] - eri_mo[i, j, j, i]
    h_eff = h_mo[act, act].copy()
    for i in core:
        h_eff += 2.0 * eri_mo[act, act, i, i] - eri_mo[act, i, i, act]
    return h_eff, eri_mo[act, act, act, act].copy(), e_core
