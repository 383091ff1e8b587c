"""STO-3G basis set construction.

Only the elements needed for the bundled molecule specs are tabulated
(H, Li, Be, N, O). Exponents are the standard STO-3G values; the
contraction coefficients are shared across elements per shell type.
"""

from dataclasses import dataclass, field

import numpy as np

# Universal STO-3G contraction coefficients per shell type.
_COEF_1S = [0.15432897, 0.53532814, 0.44463454]
_COEF_2S = [-0.09996723, 0.39951283, 0.70011547]
_COEF_2P = [0.15591627, 0.60768372, 0.39195739]

# Element -> (1s exponents, optional 2sp exponents).
_EXPONENTS = {
    "H": ([3.42525091, 0.62391373, 0.16885540], None),
    "Li": ([16.1195750, 2.9362007, 0.7946505],
           [0.6362897, 0.1478601, 0.0480887]),
    "Be": ([30.1678710, 5.4951153, 1.4871927],
           [1.3148331, 0.3055389, 0.0993707]),
    "N": ([99.1061690, 18.0523120, 4.8856602],
          [3.7804559, 0.8784966, 0.2857144]),
    "O": ([130.7093200, 23.8088610, 6.4436083],
          [5.0331513, 1.1695961, 0.3803890]),
}

ATOMIC_NUMBER = {"H": 1, "Li": 3, "Be": 4, "N": 7, "O": 8}

ANGSTROM_TO_BOHR = 1.0 / 0.52917721092


@dataclass
class ContractedGaussian:
    """A contracted Cartesian Gaussian basis function."""

    center: np.ndarray            # Bohr
    angular: tuple                # (l, m, n) Cartesian powers
    exponents: np.ndarray
    coefficients: np.ndarray      # includes primitive normalization
    norm: float = field(default=1.0)

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=float)
        self.exponents = np.asarray(self.exponents, dtype=float)
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        l, m, n = self.angular
        # Normalize each primitive, then the contraction as a whole.
        prim = _primitive_norms(self.exponents, l, m, n)
        self.coefficients = self.coefficients * prim
        from .integrals import contracted_overlap
        s = contracted_overlap(self, self)
        self.norm = 1.0 / np.sqrt(s)
        self.coefficients = self.coefficients * self.norm


def double_factorial(k):
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def _primitive_norms(alpha, l, m, n):
    pref = (2.0 * alpha / np.pi) ** 0.75
    num = (4.0 * alpha) ** ((l + m + n) / 2.0)
    den = np.sqrt(float(double_factorial(2 * l - 1)
                        * double_factorial(2 * m - 1)
                        * double_factorial(2 * n - 1)))
    return pref * num / den


def build_basis(geometry):
    """Build the STO-3G basis for a geometry given in Angstrom.

    geometry: list of (element, (x, y, z)) tuples.
    Returns (basis functions, nuclear charges, centers in Bohr).
    """
    basis = []
    charges = []
    centers = []
    for element, xyz in geometry:
        if element not in _EXPONENTS:
            raise ValueError(f"element {element} not tabulated for STO-3G")
        center = np.asarray(xyz, dtype=float) * ANGSTROM_TO_BOHR
        charges.append(ATOMIC_NUMBER[element])
        centers.append(center)
        exps_1s, exps_2sp = _EXPONENTS[element]
        basis.append(ContractedGaussian(center, (0, 0, 0), exps_1s, _COEF_1S))
        if exps_2sp is not None:
            basis.append(ContractedGaussian(center, (0, 0, 0), exps_2sp, _COEF_2S))
            for ang in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]:
                basis.append(ContractedGaussian(center, ang, exps_2sp, _COEF_2P))
    return basis, np.asarray(charges, float), np.asarray(centers, float)


def nuclear_repulsion(charges, centers):
    e = 0.0
    for i in range(len(charges)):
        for j in range(i + 1, len(charges)):
            e += charges[i] * charges[j] / np.linalg.norm(centers[i] - centers[j])
    return e
