"""One- and two-electron integrals over contracted Cartesian Gaussians.

McMurchie-Davidson scheme: Cartesian overlap distributions are expanded
in Hermite Gaussians (E coefficients), nuclear attraction and repulsion
integrals contract those expansions against Boys-function R tensors.
"""

import numpy as np
from scipy.special import gammainc, gammaln


def boys(n, x):
    """Boys function F_n(x)."""
    if x < 1e-12:
        return 1.0 / (2 * n + 1) - x / (2 * n + 3)
    a = n + 0.5
    # F_n(x) = gamma(a) * P(a, x) / (2 x^a), P the regularized lower gamma
    return np.exp(gammaln(a)) * gammainc(a, x) / (2.0 * x ** a)


def hermite_expansion(i, j, a, b, ab_dist):
    """E^{ij}_t coefficients along one axis for primitives (a, i), (b, j).

    Returns an array of length i + j + 1.
    """
    p = a + b
    q = a * b / p
    # table[(i, j)] -> array over t
    tab = {(0, 0): np.array([np.exp(-q * ab_dist * ab_dist)])}
    x_pa = -b * ab_dist / p  # P - A with A - B = ab_dist
    x_pb = a * ab_dist / p   # P - B

    def get(ii, jj):
        if (ii, jj) in tab:
            return tab[(ii, jj)]
        out = np.zeros(ii + jj + 1)
        if ii > 0:
            prev = get(ii - 1, jj)
            for t in range(ii + jj + 1):
                v = 0.0
                if t - 1 >= 0 and t - 1 < len(prev):
                    v += prev[t - 1] / (2 * p)
                if t < len(prev):
                    v += x_pa * prev[t]
                if t + 1 < len(prev):
                    v += (t + 1) * prev[t + 1]
                out[t] = v
        else:
            prev = get(ii, jj - 1)
            for t in range(ii + jj + 1):
                v = 0.0
                if t - 1 >= 0 and t - 1 < len(prev):
                    v += prev[t - 1] / (2 * p)
                if t < len(prev):
                    v += x_pb * prev[t]
                if t + 1 < len(prev):
                    v += (t + 1) * prev[t + 1]
                out[t] = v
        tab[(ii, jj)] = out
        return out

    return get(i, j)


def primitive_overlap(a, la, ra, b, lb, rb):
    p = a + b
    s = (np.pi / p) ** 1.5
    for ax in range(3):
        s *= hermite_expansion(la[ax], lb[ax], a, b, ra[ax] - rb[ax])[0]
    return s


def primitive_kinetic(a, la, rb_a, b, lb, rb_b):
    def s1d(i, j, ax):
        return hermite_expansion(i, j, a, b, rb_a[ax] - rb_b[ax])[0]

    def t1d(i, j, ax):
        t = b * (2 * j + 1) * s1d(i, j, ax) - 2 * b * b * s1d(i, j + 2, ax)
        if j >= 2:
            t -= 0.5 * j * (j - 1) * s1d(i, j - 2, ax)
        return t

    p = a + b
    pref = (np.pi / p) ** 1.5
    sx, sy, sz = (s1d(la[0], lb[0], 0), s1d(la[1], lb[1], 1),
                  s1d(la[2], lb[2], 2))
    tx, ty, tz = (t1d(la[0], lb[0], 0), t1d(la[1], lb[1], 1),
                  t1d(la[2], lb[2], 2))
    return pref * (tx * sy * sz + sx * ty * sz + sx * sy * tz)


def hermite_coulomb(t, u, v, n, p, pc):
    """R^n_{tuv} auxiliary tensor for Hermite Coulomb integrals."""
    if t == u == v == 0:
        return (-2.0 * p) ** n * boys(n, p * float(np.dot(pc, pc)))
    if t > 0:
        val = 0.0
        if t > 1:
            val += (t - 1) * hermite_coulomb(t - 2, u, v, n + 1, p, pc)
        val += pc[0] * hermite_coulomb(t - 1, u, v, n + 1, p, pc)
        return val
    if u > 0:
        val = 0.0
        if u > 1:
            val += (u - 1) * hermite_coulomb(t, u - 2, v, n + 1, p, pc)
        val += pc[1] * hermite_coulomb(t, u - 1, v, n + 1, p, pc)
        return val
    val = 0.0
    if v > 1:
        val += (v - 1) * hermite_coulomb(t, u, v - 2, n + 1, p, pc)
    val += pc[2] * hermite_coulomb(t, u, v - 1, n + 1, p, pc)
    return val


def primitive_nuclear(a, la, ra, b, lb, rb, rc):
    p = a + b
    cap = (a * ra + b * rb) / p
    pc = cap - rc
    ex = hermite_expansion(la[0], lb[0], a, b, ra[0] - rb[0])
    ey = hermite_expansion(la[1], lb[1], a, b, ra[1] - rb[1])
    ez = hermite_expansion(la[2], lb[2], a, b, ra[2] - rb[2])
    val = 0.0
    for t in range(len(ex)):
        for u in range(len(ey)):
            for v in range(len(ez)):
                val += ex[t] * ey[u] * ez[v] * hermite_coulomb(t, u, v, 0, p, pc)
    return 2.0 * np.pi / p * val


def primitive_eri(a, la, ra, b, lb, rb, c, lc, rc, d, ld, rd):
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    cap_p = (a * ra + b * rb) / p
    cap_q = (c * rc + d * rd) / q
    pq = cap_p - cap_q
    e1 = [hermite_expansion(la[ax], lb[ax], a, b, ra[ax] - rb[ax]) for ax in range(3)]
    e2 = [hermite_expansion(lc[ax], ld[ax], c, d, rc[ax] - rd[ax]) for ax in range(3)]
    val = 0.0
    for t in range(len(e1[0])):
        for u in range(len(e1[1])):
            for v in range(len(e1[2])):
                c1 = e1[0][t] * e1[1][u] * e1[2][v]
                if c1 == 0.0:
                    continue
                for tt in range(len(e2[0])):
                    for uu in range(len(e2[1])):
                        for vv in range(len(e2[2])):
                            c2 = e2[0][tt] * e2[1][uu] * e2[2][vv]
                            if c2 == 0.0:
                                continue
                            sign = (-1.0) ** (tt + uu + vv)
                            val += c1 * c2 * sign * hermite_coulomb(
                                t + tt, u + uu, v + vv, 0, alpha, pq)
    return val * 2.0 * np.pi ** 2.5 / (p * q * np.sqrt(p + q))


def _contract2(g1, g2, kernel):
    val = 0.0
    for a, ca in zip(g1.exponents, g1.coefficients):
        for b, cb in zip(g2.exponents, g2.coefficients):
            val += ca * cb * kernel(a, b)
    return val


def contracted_overlap(g1, g2):
    return _contract2(g1, g2,
                      lambda a, b: primitive_overlap(a, g1.angular, g1.center,
                                                     b, g2.angular, g2.center))


def contracted_kinetic(g1, g2):
    return _contract2(g1, g2,
                      lambda a, b: primitive_kinetic(a, g1.angular, g1.center,
                                                     b, g2.angular, g2.center))


def contracted_nuclear(g1, g2, charges, centers):
    def kern(a, b):
        v = 0.0
        for z, rc in zip(charges, centers):
            v -= z * primitive_nuclear(a, g1.angular, g1.center,
                                       b, g2.angular, g2.center, rc)
        return v
    return _contract2(g1, g2, kern)


def contracted_eri(g1, g2, g3, g4):
    val = 0.0
    for a, ca in zip(g1.exponents, g1.coefficients):
        for b, cb in zip(g2.exponents, g2.coefficients):
            for c, cc in zip(g3.exponents, g3.coefficients):
                for d, cd in zip(g4.exponents, g4.coefficients):
                    val += ca * cb * cc * cd * primitive_eri(
                        a, g1.angular, g1.center, b, g2.angular, g2.center,
                        c, g3.angular, g3.center, d, g4.angular, g4.center)
    return val


def integral_tensors(basis, charges, centers):
    """Overlap, core Hamiltonian, and chemist-notation ERI tensor (ij|kl)."""
    n = len(basis)
    s = np.zeros((n, n))
    t = np.zeros((n, n))
    v = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            s[i, j] = s[j, i] = contracted_overlap(basis[i], basis[j])
            t[i, j] = t[j, i] = contracted_kinetic(basis[i], basis[j])
            v[i, j] = v[j, i] = contracted_nuclear(basis[i], basis[j],
                                                   charges, centers)
    eri = np.zeros((n, n, n, n))
    # 8-fold permutational symmetry of real orbitals
    for i in range(n):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(n):
                for l in range(k + 1):
                    kl = k * (k + 1) // 2 + l
                    if ij < kl:
                        continue
                    val = contracted_eri(basis[i], basis[j], basis[k], basis[l])
                    for (p, q, r, w) in [(i, j, k, l), (j, i, k, l),
                                         (i, j, l, k), (j, i, l, k),
                                         (k, l, i, j), (l, k, i, j),
                                         (k, l, j, i), (l, k, j, i)]:
                        eri[p, q, r, w] = val
    return s, t + v, eri
