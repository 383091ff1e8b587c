"""End-to-end Hamiltonian file generation for a molecule spec."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .basis import ATOMIC_NUMBER, build_basis, nuclear_repulsion
from .integrals import integral_tensors
from .qubit_mapping import (active_space_reduction, fermionic_to_qubit,
                            spin_orbital_integrals)
from .scf import restricted_hartree_fock


@dataclass
class MoleculeSpec:
    name: str
    geometry: list                      # [(element, (x, y, z) in Angstrom)]
    basis: str = "sto-3g"
    charge: int = 0
    active: Optional[tuple] = None      # (n_orbitals, n_electrons)

    @classmethod
    def from_text(cls, text):
        fields = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"spec line {lineno}: expected key = value")
            key, _, value = line.partition("=")
            fields[key.strip()] = value.strip()
        if "name" not in fields or "geometry" not in fields:
            raise ValueError("spec requires 'name' and 'geometry'")
        geometry = []
        for atom in fields["geometry"].split(";"):
            parts = atom.split()
            if len(parts) != 4:
                raise ValueError(f"bad atom entry: {atom!r}")
            geometry.append((parts[0], tuple(float(x) for x in parts[1:])))
        active = None
        if "active" in fields:
            orb, ele = fields["active"].split(",")
            active = (int(orb.rstrip("o ")), int(ele.rstrip("e ")))
        return cls(name=fields["name"], geometry=geometry,
                   basis=fields.get("basis", "sto-3g"),
                   charge=int(fields.get("charge", "0")),
                   active=active)


def _reference_energy(terms, offset, n_electrons):
    """Energy of the |0..01..1> determinant under the qubit Hamiltonian."""
    occ_mask = (1 << n_electrons) - 1
    e = offset
    for letters, coeff in terms.items():
        if any(c in "XY" for c in letters):
            continue
        zmask = sum(1 << i for i, c in enumerate(letters) if c == "Z")
        e += coeff * (-1.0) ** bin(occ_mask & zmask).count("1")
    return e


def _ground_energy(terms, offset, n_qubits):
    dim = 1 << n_qubits
    mat = np.zeros((dim, dim), dtype=complex)
    phase = {"I": (0, [1.0, 1.0]), "Z": (0, [1.0, -1.0]),
             "X": (1, [1.0, 1.0]), "Y": (1, [1j, -1j])}
    cols = np.arange(dim)
    for letters, coeff in terms.items():
        xmask = 0
        amp = np.full(dim, complex(coeff))
        for q, letter in enumerate(letters):
            flip, vals = phase[letter]
            xmask |= flip << q
            bit = (cols >> q) & 1
            amp = amp * np.where(bit == 0, vals[0], vals[1])
        mat[cols ^ xmask, cols] += amp
    evals = np.linalg.eigvalsh(mat)
    return float(evals[0]) + offset


def generate(spec: MoleculeSpec):
    """Run HF, reduce to the active space, map to qubits.

    Returns the Hamiltonian file text.
    """
    if spec.basis.lower() != "sto-3g":
        raise ValueError("only the STO-3G basis is supported")
    basis, charges, centers = build_basis(spec.geometry)
    n_electrons = int(sum(ATOMIC_NUMBER[el] for el, _ in spec.geometry)) - spec.charge
    e_nuc = nuclear_repulsion(charges, centers)
    s, hcore, eri = integral_tensors(basis, charges, centers)
    e_hf, cmo, _ = restricted_hartree_fock(s, hcore, eri, n_electrons, e_nuc)

    h_mo = cmo.T @ hcore @ cmo
    eri_mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", cmo, cmo, cmo, cmo, eri,
                       optimize=True)

    if spec.active is not None:
        n_act_orb, n_act_ele = spec.active
        n_frozen = (n_electrons - n_act_ele) // 2
        h_eff, eri_eff, e_const = active_space_reduction(
            h_mo, eri_mo, e_nuc, n_frozen, n_act_orb)
        n_ele_qubit = n_act_ele
    else:
        h_eff, eri_eff, e_const = h_mo, eri_mo, e_nuc
        n_ele_qubit = n_electrons

    h1, g2 = spin_orbital_integrals(h_eff, eri_eff)
    qubit_ham = fermionic_to_qubit(h1, g2, e_const).compressed(1e-10)
    n_qubits = qubit_ham.n_qubits

    identity = ("I",) * n_qubits
    offset = float(np.real(qubit_ham.terms.pop(identity, 0.0)))
    terms = {}
    for letters, coeff in qubit_ham.terms.items():
        if abs(coeff.imag) > 1e-9:
            raise RuntimeError(f"non-real coefficient for {letters}: {coeff}")
        terms[letters] = float(coeff.real)

    e_ref = _reference_energy(terms, offset, n_ele_qubit)
    if spec.active is None and abs(e_ref - e_hf) > 1e-7:
        raise RuntimeError("reference-state energy disagrees with SCF energy")
    e_fci = _ground_energy(terms, offset, n_qubits)

    return render_file(spec, n_qubits, n_ele_qubit, terms, offset,
                       hf_energy=e_ref, fci_energy=e_fci)


def render_file(spec, n_qubits, n_electrons, terms, offset,
                hf_energy, fci_energy):
    geom = "; ".join(f"{el} {x:g} {y:g} {z:g}" for el, (x, y, z) in spec.geometry)
    lines = [
        f"# n_qubits = {n_qubits}",
        f"# n_electrons = {n_electrons}",
        f"# molecule = {spec.name}",
        f"# basis = {spec.basis}",
        f"# geometry = {geom}",
        f"# hf_energy = {hf_energy:.12g}",
        f"# fci_energy = {fci_energy:.12g}",
        "# note = Jordan-Wigner, interleaved spin orbitals (qubit 2p alpha,"
        " 2p+1 beta), qubit 0 = least significant bit",
    ]
    if offset != 0.0:
        lines.append(f"{offset:.12g} I")
    for letters in sorted(terms):
        coeff = terms[letters]
        factors = " ".join(f"{c}{i}" for i, c in enumerate(letters) if c != "I")
        lines.append(f"{coeff:.12g} {factors}")
    return "\n".join(lines) + "\n"
