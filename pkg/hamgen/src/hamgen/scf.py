"""Restricted Hartree-Fock with DIIS."""

import numpy as np
from scipy.linalg import eigh


class SCFError(RuntimeError):
    pass


def restricted_hartree_fock(s, hcore, eri, n_electrons, e_nuc,
                            max_cycles=200, conv=1e-11):
    """Solve RHF; returns (total energy, MO coefficients, orbital energies).

    eri is chemist notation (ij|kl); n_electrons must be even.
    """
    if n_electrons % 2:
        raise SCFError("RHF requires an even electron count")
    nocc = n_electrons // 2
    # symmetric orthogonalization
    sval, svec = np.linalg.eigh(s)
    x = svec @ np.diag(sval ** -0.5) @ svec.T

    def fock(dm):
        j = np.einsum("ijkl,kl->ij", eri, dm)
        k = np.einsum("ikjl,kl->ij", eri, dm)
        return hcore + j - 0.5 * k

    dm = np.zeros_like(s)
    energy = 0.0
    err_vecs, focks = [], []
    for cycle in range(max_cycles):
        f = fock(dm)
        # DIIS on the orthogonalized gradient FDS - SDF. The core-guess
        # cycle (dm = 0) has a vanishing gradient by construction and must
        # stay out of the history, or extrapolation locks onto hcore.
        if cycle > 0:
            grad = x.T @ (f @ dm @ s - s @ dm @ f) @ x
            err_vecs.append(grad.ravel())
            focks.append(f)
        if len(err_vecs) > 8:
            err_vecs.pop(0)
            focks.pop(0)
        if len(err_vecs) > 1:
            k = len(err_vecs)
            bmat = -np.ones((k + 1, k + 1))
            bmat[-1, -1] = 0.0
            for i in range(k):
                for j in range(k):
                    bmat[i, j] = err_vecs[i] @ err_vecs[j]
            rhs = np.zeros(k + 1)
            rhs[-1] = -1.0
            try:
                coeffs = np.linalg.solve(bmat, rhs)[:k]
                f = sum(c * fi for c, fi in zip(coeffs, focks))
            except np.linalg.LinAlgError:
                pass
        eps, cmo = eigh(f, s)
        occ = cmo[:, :nocc]
        dm_new = 2.0 * occ @ occ.T
        e_new = 0.5 * np.einsum("ij,ij->", dm_new, hcore + fock(dm_new)) + e_nuc
        if abs(e_new - energy) < conv and np.max(np.abs(dm_new - dm)) < 1e-8:
            return e_new, cmo, eps
        dm, energy = dm_new, e_new
    raise SCFError(f"SCF did not converge in {max_cycles} cycles")
