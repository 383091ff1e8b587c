"""Shot-threshold calculus against brute-force binomial oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jbmvqe.shots import (averaged_prob, prob_jbm, prob_sm, shot_threshold,
                          sign_success_prob, uniform_grid)


# independent brute-force oracles (pure math.comb enumeration) ---------------


def brute_prob_sm(m, tau, y):
    s = (1.0 + y) / 2.0
    total = 0.0
    for x in range(m + 1):
        if abs(2.0 * x / m - 1.0 - y) <= tau + 1e-12:
            total += math.comb(m, x) * s ** x * (1 - s) ** (m - x)
    return total


def brute_prob_jbm(m, tau, y):
    s = (1.0 + y * y) / 2.0
    total = 0.0
    for x in range(m + 1):
        est = math.sqrt(max(0.0, 2.0 * x / m - 1.0))
        if abs(est - abs(y)) <= tau + 1e-12:
            total += math.comb(m, x) * s ** x * (1 - s) ** (m - x)
    return total


@pytest.mark.parametrize("m", [1, 7, 25, 60])
@pytest.mark.parametrize("tau", [0.05, 0.2, 0.5])
def test_prob_sm_matches_bruteforce(m, tau):
    for y in np.linspace(-0.99, 0.99, 21):
        assert prob_sm(m, tau, y) == pytest.approx(
            brute_prob_sm(m, tau, float(y)), abs=1e-9)


@pytest.mark.parametrize("m", [1, 7, 25, 60])
@pytest.mark.parametrize("tau", [0.05, 0.2, 0.5])
def test_prob_jbm_matches_bruteforce(m, tau):
    for y in np.linspace(-0.99, 0.99, 21):
        assert prob_jbm(m, tau, y) == pytest.approx(
            brute_prob_jbm(m, tau, float(y)), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=80),
       st.floats(min_value=0.02, max_value=1.0),
       st.floats(min_value=-1.0, max_value=1.0))
def test_prob_properties(m, tau, y):
    p_sm = float(prob_sm(m, tau, y))
    p_jbm = float(prob_jbm(m, tau, y))
    assert 0.0 <= p_sm <= 1.0
    assert 0.0 <= p_jbm <= 1.0
    # symmetry in the sign of the expectation
    assert p_sm == pytest.approx(float(prob_sm(m, tau, -y)), abs=1e-12)
    assert p_jbm == pytest.approx(float(prob_jbm(m, tau, -y)), abs=1e-12)
    # monotone in tau
    assert float(prob_sm(m, min(2.0, tau * 1.5), y)) >= p_sm - 1e-12
    assert float(prob_jbm(m, min(2.0, tau * 1.5), y)) >= p_jbm - 1e-12


def test_prob_tau2_is_certain():
    grid = uniform_grid(50)
    assert averaged_prob("SM", 9, 2.0, grid) == pytest.approx(1.0)
    assert averaged_prob("JBM", 9, 2.0, grid) == pytest.approx(1.0)


def test_uniform_grid():
    g = uniform_grid(2000)
    assert g.shape == (2000,)
    assert g[0] == -1.0 and g[-1] == 1.0
    gm = uniform_grid(4, endpoint=False)
    np.testing.assert_allclose(gm, [-0.75, -0.25, 0.25, 0.75])


def test_input_validation():
    with pytest.raises(ValueError):
        prob_sm(0, 0.1, 0.0)
    with pytest.raises(ValueError):
        prob_sm(10, 0.0, 0.0)
    with pytest.raises(ValueError):
        shot_threshold("SM", 0.1, 1.5, uniform_grid(10))
    with pytest.raises(ValueError):
        averaged_prob("SM", 10, 0.1, [])


def brute_threshold(kind, tau, p, grid, cap=3000):
    fn = brute_prob_sm if kind == "SM" else brute_prob_jbm
    for m in range(1, cap):
        if np.mean([fn(m, tau, float(y)) for y in grid]) >= p:
            return m
    raise AssertionError("no crossing")


@pytest.mark.parametrize("kind,tau,p", [
    ("SM", 0.3, 0.8), ("SM", 0.5, 0.9), ("JBM", 0.5, 0.75),
    ("JBM", 0.4, 0.8),
])
def test_shot_threshold_matches_bruteforce(kind, tau, p):
    grid = uniform_grid(41)
    assert shot_threshold(kind, tau, p, grid) == \
        brute_threshold(kind, tau, p, grid)


def test_shot_threshold_verified_minimal():
    grid = uniform_grid(101)
    m = shot_threshold("SM", 0.2, 0.9, grid)
    assert averaged_prob("SM", m, 0.2, grid) >= 0.9
    assert averaged_prob("SM", m - 1, 0.2, grid) < 0.9


def test_shot_threshold_cap():
    with pytest.raises(RuntimeError):
        shot_threshold("SM", 0.001, 0.999, uniform_grid(21), cap=100)


# sign success ---------------------------------------------------------------


def brute_sign_success(m, y):
    """Majority vote over m +-1 shots with P(correct side) = (1+|y|)/2."""
    s = (1.0 + abs(y)) / 2.0
    return sum(math.comb(m, k) * s ** (m - k) * (1 - s) ** k
               for k in range((m - 1) // 2 + 1))


@pytest.mark.parametrize("m", [1, 3, 17, 51])
def test_sign_success_matches_bruteforce(m):
    for y in (0.0, 0.1, 0.2, 0.5, -0.3, 0.95):
        assert sign_success_prob(m, y) == pytest.approx(
            brute_sign_success(m, y), abs=1e-12)


def test_sign_success_reference_point():
    # frozen reference: 17 shots at |<P>| = 0.2
    assert sign_success_prob(17, 0.2) == pytest.approx(0.80106, abs=5e-5)


def test_sign_success_rejects_even():
    with pytest.raises(ValueError):
        sign_success_prob(16, 0.2)
    with pytest.raises(ValueError):
        sign_success_prob(-1, 0.2)


def test_sign_success_monotone_in_expectation():
    probs = [sign_success_prob(17, y) for y in (0.0, 0.1, 0.2, 0.4, 0.8)]
    assert probs == sorted(probs)
    assert probs[0] == pytest.approx(0.5)
