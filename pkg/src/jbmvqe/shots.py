"""Binomial shot-threshold calculus for projective and Bell estimation.

For a Pauli with expectation y, a projective shot succeeds (+1 outcome)
with probability (1+y)/2, so an m-shot estimate is 2x/m - 1 with
x ~ Binomial(m, (1+y)/2). Under Bell sampling the per-shot eigenvalue
of P (x) P has mean y^2, success probability (1+y^2)/2, and the abs
estimate is sqrt(max{0, 2x/m - 1}).

`prob_sm` / `prob_jbm` give the exact probability that the respective
estimate lands within tau of the target; `shot_threshold` inverts the
grid-averaged probability. scipy's binom.cdf evaluates the regularized
incomplete beta function, which is the log-space-stable binomial tail.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import binom

# Guard against float roundoff when m*(1 +- ...)/2 is an exact integer.
_EDGE = 1e-9

DEFAULT_THRESHOLD_CAP = 10 ** 7


def uniform_grid(count: int = 2000, endpoint: bool = True) -> np.ndarray:
    """`count` uniformly spaced expectation values in [-1, 1].

    The endpoint-inclusive variant (np.linspace) is the one that
    reproduces the published JBM threshold; `endpoint=False` selects
    midpoints of `count` equal subintervals instead.
    """
    if endpoint:
        return np.linspace(-1.0, 1.0, count)
    edges = np.linspace(-1.0, 1.0, count + 1)
    return 0.5 * (edges[:-1] + edges[1:])


def prob_sm(shots: int, tau: float, expectation) -> np.ndarray:
    """P(|2x/m - 1 - y| <= tau) for x ~ Binomial(m, (1+y)/2); vectorized."""
    _check(shots, tau)
    y = np.asarray(expectation, dtype=np.float64)
    xmin = np.maximum(0.0, np.ceil(shots * (1.0 + y - tau) / 2.0 - _EDGE))
    xmax = np.minimum(shots, np.floor(shots * (1.0 + y + tau) / 2.0 + _EDGE))
    s = (1.0 + y) / 2.0
    out = np.where(xmax < xmin, 0.0,
                   binom.cdf(xmax, shots, s) - binom.cdf(xmin - 1, shots, s))
    return np.clip(out, 0.0, 1.0)


def prob_jbm(shots: int, tau: float, expectation) -> np.ndarray:
    """P(|sqrt(max{0, 2x/m - 1}) - |y|| <= tau), x ~ Binomial(m, (1+y^2)/2)."""
    _check(shots, tau)
    y = np.asarray(expectation, dtype=np.float64)
    t = np.abs(y)
    upper = t + tau
    lower = t - tau
    s = (1.0 + y * y) / 2.0
    xmax = np.minimum(shots,
                      np.floor(shots * (1.0 + upper ** 2) / 2.0 + _EDGE))
    # when lower <= 0 the clipped estimate 0 qualifies, so every x with
    # 2x/m - 1 <= 0 is in the acceptance set
    xmin = np.where(lower <= 0.0, 0.0,
                    np.ceil(shots * (1.0 + lower ** 2) / 2.0 - _EDGE))
    out = np.where(xmax < xmin, 0.0,
                   binom.cdf(xmax, shots, s) - binom.cdf(xmin - 1, shots, s))
    return np.clip(out, 0.0, 1.0)


_PROB = {"SM": prob_sm, "JBM": prob_jbm}


def averaged_prob(kind: str, shots: int, tau: float, grid) -> float:
    """Arithmetic mean of prob_{kind} over the grid of expectations."""
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise ValueError("empty expectation grid")
    return float(np.mean(_PROB[kind](shots, tau, grid)))


def shot_threshold(kind: str, tau: float, p: float, grid,
                   cap: int = DEFAULT_THRESHOLD_CAP) -> int:
    """Least m with averaged_prob(kind, m, tau, grid) >= p.

    Exponential doubling brackets a crossing, binary search narrows it,
    then a downward scan handles isolated crossings (averaged_prob is
    not monotone in m at fine scales). The returned m is verified:
    averaged_prob(m) >= p and averaged_prob(m - 1) < p.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    grid = np.asarray(grid, dtype=np.float64)

    def ok(m):
        return averaged_prob(kind, m, tau, grid) >= p

    hi = 1
    while not ok(hi):
        hi *= 2
        if hi > cap:
            raise RuntimeError(f"no crossing below cap {cap}")
    lo = hi // 2  # ok(lo) unknown/false, ok(hi) true
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    # The averaged probability is not monotone in m at fine scales (the
    # integer acceptance bounds shift discretely), so the first crossing
    # can sit isolated below the bisection answer. Scan downward until a
    # run of consecutive failures rules out anything smaller.
    m = hi
    k, fails, patience = hi - 1, 0, max(200, hi // 50)
    while k >= 1 and fails < patience:
        if ok(k):
            m, fails = k, 0
        else:
            fails += 1
        k -= 1
    assert ok(m) and (m == 1 or not ok(m - 1))
    return m


def sign_success_prob(shots_odd: int, expectation: float) -> float:
    """Probability that an m-shot majority vote recovers sign(<P>).

    Ties cannot occur for odd m; the vote succeeds when more than half
    of the shots land on the true-sign side.
    """
    if shots_odd < 1 or shots_odd % 2 == 0:
        raise ValueError("shot count must be an odd positive integer")
    s = (1.0 + abs(expectation)) / 2.0  # per-shot correct-side probability
    k = (shots_odd - 1) // 2  # failures allowed: at most (m-1)/2 wrong shots
    return float(binom.cdf(k, shots_odd, 1.0 - s))


def _check(shots, tau):
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if not 0.0 < tau <= 2.0:
        raise ValueError("tau must lie in (0, 2]")
