import math

import numpy as np
import pytest

from expansion_bounds.asymmetric import ExponentPoint, f_value, sample_feasible
from expansion_bounds.entropy import EntropyProblem, solve_entropy
from expansion_bounds.errors import NoSignChange, OutOfDomain, UnsupportedDelta
from expansion_bounds.symmetric import (
    VERIFIED_DELTAS, SymmetricWeights, format4, h_derivative, h_point, h_value, nu_star,
    q_decomposition_expanded, q_polynomial, root_bound_verified, truncate4, verify_q_positive,
    verify_root_bound,
)

NU_TRUNCATED = {4: "0.4894", 6: "1.1205", 8: "1.8130"}


def test_weights_delta4():
    w = SymmetricWeights.for_delta(4)
    assert w.b == (1.0, 4.0, 3.0)
    assert w.verified


def test_weights_general_even_flagged():
    w = SymmetricWeights.for_delta(10)
    assert w.b == (1.0, 10.0, 45.0, 120.0, 210.0, 126.0)
    assert not w.verified
    assert not root_bound_verified(10)


@pytest.mark.parametrize("delta", [2, 3, 5, 7])
def test_weights_reject_bad_delta(delta):
    with pytest.raises(OutOfDomain):
        SymmetricWeights.for_delta(delta)


# --- H ---------------------------------------------------------------------

def test_h_limit_at_zero():
    assert h_value(4, 1e-9) == pytest.approx(-math.log(2), abs=1e-4)


@pytest.mark.parametrize("delta,gamma", [(4, 0.2447), (6, 0.56025)])
def test_h_vanishes_near_headline_root(delta, gamma):
    assert abs(h_value(delta, gamma)) <= 2e-3


@pytest.mark.parametrize("gamma", [0.0, -0.1, 1.0, 1.5])
def test_h_domain(gamma):
    with pytest.raises(OutOfDomain):
        h_value(4, gamma)


def test_h_derivative_matches_finite_difference_point():
    h = 1e-6
    fd = (h_value(4, 0.3 + h) - h_value(4, 0.3 - h)) / (2 * h)
    assert h_derivative(4, 0.3) == pytest.approx(fd, abs=1e-5)


@pytest.mark.parametrize("delta", VERIFIED_DELTAS)
def test_h_derivative_matches_finite_difference_grid(delta):
    h = 1e-6
    for gamma in np.linspace(0.02, delta / 4 - 0.02, 40):
        fd = (h_value(delta, gamma + h) - h_value(delta, gamma - h)) / (2 * h)
        assert abs(h_derivative(delta, float(gamma)) - fd) <= 1e-5


@pytest.mark.parametrize("delta", VERIFIED_DELTAS)
def test_h_derivative_positive(delta):
    for gamma in np.linspace(0.01, delta / 8, 500, endpoint=False):
        assert h_derivative(delta, float(gamma)) > 0


@pytest.mark.parametrize("delta", VERIFIED_DELTAS)
def test_h_strictly_increasing(delta):
    gammas = np.linspace(1e-4, delta / 8, 1001, endpoint=False)
    values = [h_value(delta, float(g)) for g in gammas]
    assert np.all(np.diff(values) > 0)


@pytest.mark.parametrize("delta", VERIFIED_DELTAS)
def test_convexity_reduction(delta):
    rng = np.random.default_rng(delta)
    w = SymmetricWeights.for_delta(delta)
    for _ in range(100):
        gamma = float(rng.uniform(0.01, delta / 8))
        x = sample_feasible(delta, 0.5, gamma, int(rng.integers(2**32)))
        x_bar = sample_feasible(delta, 0.5, gamma, int(rng.integers(2**32)))
        assert f_value(ExponentPoint(0.5, gamma, x, x_bar), delta) <= h_value(delta, gamma) + 1e-9
        # diagonal: f(1/2, gamma, x, x) is the convexified h
        assert f_value(ExponentPoint(0.5, gamma, x, x), delta) == pytest.approx(
            h_point(delta, gamma, x), abs=1e-12)
    gamma = 0.3 * delta / 8
    y = solve_entropy(EntropyProblem(0.5, gamma, w.b)).y_star
    assert f_value(ExponentPoint(0.5, gamma, y, y), delta) == pytest.approx(h_value(delta, gamma), abs=1e-9)


# --- Q(z) ------------------------------------------------------------------

def test_q_delta4():
    assert q_polynomial(4) == [0, 2, 1, -6, -3]
    # z (2 + z) (1 - 3 z^2)
    assert q_decomposition_expanded(4) == [0, 2, 1, -6, -3]


def test_q_delta6():
    assert q_polynomial(6) == [0, 3, 12, 0, -30, -15]


def test_q_delta8():
    assert q_polynomial(8) == [0, 4, 24, 56, -14, -140, -70]


@pytest.mark.parametrize("delta", VERIFIED_DELTAS)
def test_q_coefficients_are_python_ints(delta):
    assert all(type(c) is int for c in q_polynomial(delta))
    assert q_decomposition_expanded(delta) == q_polynomial(delta)


@pytest.mark.parametrize("delta", VERIFIED_DELTAS)
def test_q_positive(delta):
    assert verify_q_positive(delta)


@pytest.mark.parametrize("delta", [10, 5])
def test_q_unsupported(delta):
    with pytest.raises(UnsupportedDelta):
        q_polynomial(delta)
    with pytest.raises(UnsupportedDelta):
        verify_q_positive(delta)


@pytest.mark.parametrize("delta", VERIFIED_DELTAS)
def test_q_is_root_equation_numerator(delta):
    # P(z0) > 0 puts z* below z0; Q(z0) carries the same sign
    w = SymmetricWeights.for_delta(delta).b
    for gamma in np.linspace(0.01, delta / 8 - 0.01, 25):
        z0 = math.sqrt(gamma / (delta / 2 - gamma))
        p = sum((0.5 * i - gamma) * bi * z0**i for i, bi in enumerate(w))
        assert p > 0
        assert np.polynomial.polynomial.polyval(z0, q_polynomial(delta)) > 0


# --- root bound -------------------------------------------------------------

def test_root_bound_examples():
    assert verify_root_bound(4, 0.25).holds
    assert verify_root_bound(8, 0.999).holds
    small = verify_root_bound(4, 1e-6)
    assert small.holds
    assert small.z_star / small.z0 < 0.9


@pytest.mark.parametrize("delta", VERIFIED_DELTAS)
def test_root_bound_grid(delta):
    for gamma in np.linspace(0, delta / 8, 1002)[1:-1]:
        w = verify_root_bound(delta, float(gamma))
        assert w.holds and w.z_star < w.z0


@pytest.mark.parametrize("gamma", [0.0, 0.5, 0.7])
def test_root_bound_domain(gamma):
    with pytest.raises(OutOfDomain):
        verify_root_bound(4, gamma)


# --- nu* -------------------------------------------------------------------

@pytest.mark.parametrize("delta", VERIFIED_DELTAS)
def test_nu_star_headline(delta):
    nu = nu_star(delta)
    assert format4(nu) == NU_TRUNCATED[delta]
    assert nu / 2 < delta / 8
    h = h_value(delta, nu / 2)
    assert abs(h) <= 1e-9 * h_derivative(delta, nu / 2)


def test_nu_star_tol_affects_precision():
    coarse, fine = nu_star(4, 1e-4), nu_star(4, 1e-12)
    assert abs(coarse - fine) <= 1e-4


def test_nu_star_tol_floor():
    with pytest.raises(ValueError):
        nu_star(4, 1e-13)


def test_nu_star_unverified_degree_computes():
    nu = nu_star(10)
    assert abs(h_value(10, nu / 2)) <= 1e-6
    assert nu / 2 > 10 / 8  # outside the proven monotone range, hence the flag


def test_nu_star_full_precision_values():
    assert nu_star(4) == pytest.approx(0.4894759, abs=1e-7)
    assert nu_star(6) == pytest.approx(1.1205070, abs=1e-7)
    assert nu_star(8) == pytest.approx(1.8130714, abs=1e-7)


def test_truncation_not_rounding():
    assert truncate4(1.81307) == 1.813
    assert format4(1.81307) == "1.8130"
    assert format4(0.48949999) == "0.4894"


def test_no_sign_change_is_reported(monkeypatch):
    import expansion_bounds.symmetric as sym
    monkeypatch.setattr(sym, "h_value", lambda delta, gamma: 1.0)
    with pytest.raises(NoSignChange):
        sym.nu_star(4)
