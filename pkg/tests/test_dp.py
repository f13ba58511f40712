import math
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from locscale_w1.dp import (
    DpMechanism,
    Mechanism,
    PrivacyBudgetWarning,
    approx_condition,
    calibrate_epsilon,
    dp_bound_improved,
    dp_bound_legacy,
    dp_exact_gaussian,
    dp_laplace_gauss_approx,
    dp_report,
    noise_scale,
    noise_sd,
    noise_w1_cost,
)
from locscale_w1.errors import DomainError
from locscale_w1.families import SQRT_2_OVER_PI, Family, LocScale

G = Family.of("gaussian")
X1, X2 = LocScale(G, 2.0, 5.0), LocScale(G, 5.0, 2.0)

eps_small = st.floats(0.01, 0.99)
sens = st.floats(0.1, 10.0)
deltas = st.floats(1e-9, 0.5)


def test_laplace_values():
    m = DpMechanism.laplace(0.5)
    assert noise_scale(m) == 2.0
    assert noise_w1_cost(m) == 2.0
    assert noise_sd(m) == 2.0 * math.sqrt(2.0)
    assert dp_bound_improved(0.0, m) == 2.0
    assert dp_bound_legacy(1.0, m) == 1.0 + 2.0 * math.sqrt(2.0)


def test_gaussian_values():
    m = DpMechanism.gaussian(0.5, 1e-2)
    # frozen from mpmath: sqrt(2 ln 125) / eps and a quadrature of the folded normal
    assert abs(noise_scale(m) - 6.215022920184479) < 1e-14
    assert abs(noise_w1_cost(m) - 2.0 / 0.5 * math.sqrt(math.log(125.0) / math.pi)) < 1e-14
    assert abs(dp_exact_gaussian(X1, X2, m) - 5.3571060696452266) < 1e-12


def test_reference_exact_and_approx():
    # frozen from mpmath quadrature of E|-3 + (s - 2) Z| with the widened scale s
    m = DpMechanism.gaussian(0.99, 1e-2)
    assert abs(noise_scale(m) - 3.1389004647396359) < 1e-14
    assert abs(dp_exact_gaussian(X1, X2, m) - 3.9916876441140515) < 1e-12
    for eps, want in ((0.99, 3.5997987986842199), (1.0, 3.5977915584300825), (0.5, 3.8984054068498823)):
        value, valid = dp_laplace_gauss_approx(X1, X2, DpMechanism.laplace(eps))
        assert valid
        assert abs(value - want) < 1e-12


def test_validation():
    with pytest.raises(DomainError):
        DpMechanism.laplace(0.0)
    with pytest.raises(DomainError):
        DpMechanism.laplace(1.0, sensitivity=-1.0)
    with pytest.raises(DomainError):
        DpMechanism(Mechanism.LAPLACE, 1.0, 1.0, delta=0.1)
    with pytest.raises(DomainError):
        DpMechanism(Mechanism.GAUSSIAN, 0.5)
    with pytest.raises(DomainError):
        DpMechanism.gaussian(0.5, 1.0)
    with pytest.raises(DomainError):
        DpMechanism.gaussian(1.0, 0.01)
    with pytest.raises(DomainError):
        DpMechanism("exponential", 1.0)
    with pytest.raises(DomainError):
        dp_bound_legacy(-1.0, DpMechanism.laplace(1.0))


def test_large_epsilon_opt_in_warns():
    with pytest.warns(PrivacyBudgetWarning):
        m = DpMechanism.gaussian(2.0, 0.01, allow_large_epsilon=True)
    assert m.epsilon == 2.0


def test_gaussian_pair_required():
    lap = LocScale(Family.of("laplace"), 0.0, 1.0)
    m = DpMechanism.gaussian(0.5, 0.01)
    with pytest.raises(DomainError):
        dp_exact_gaussian(lap, lap, m)
    r = dp_report(lap, lap, m)
    assert r.exact_or_approx is None and r.label is None and r.approx_valid is None


@given(eps_small, sens, st.floats(0, 100))
def test_laplace_gap(eps, s, base):
    m = DpMechanism.laplace(eps, s)
    gap = dp_bound_legacy(base, m) - dp_bound_improved(base, m)
    assert gap > 0.0
    assert abs(gap - (math.sqrt(2.0) - 1.0) * s / eps) <= 1e-12 * max(1.0, base + s / eps)


@given(eps_small, deltas, sens, st.floats(0, 100))
def test_gaussian_gap_ratio(eps, delta, s, base):
    m = DpMechanism.gaussian(eps, delta, s)
    gap = dp_bound_legacy(base, m) - dp_bound_improved(base, m)
    assert gap > 0.0
    ratio = gap / noise_scale(m)
    assert abs(ratio - (1.0 - SQRT_2_OVER_PI)) <= 1e-12 * max(1.0, base / noise_scale(m))


@given(eps_small, deltas, st.floats(-10, 10), st.floats(0.1, 10), st.floats(-10, 10), st.floats(0.1, 10))
@settings(max_examples=200)
def test_exact_gaussian_sits_in_bounds(eps, delta, a1, b1, a2, b2):
    x1, x2 = LocScale(G, a1, b1), LocScale(G, a2, b2)
    m = DpMechanism.gaussian(eps, delta)
    r = dp_report(x1, x2, m)
    assert r.label == "exact-gaussian"
    # noise only widens X1, so |mu_y| still bounds from below
    assert abs(a1 - a2) - 1e-9 <= r.exact_or_approx <= r.bound_improved + 1e-9
    assert r.bound_improved < r.bound_legacy


@given(eps_small, st.floats(0.1, 20))
def test_approx_validity_threshold(eps, sigma):
    m = DpMechanism.laplace(eps)
    x1 = LocScale(G, 0.0, sigma)
    assert approx_condition(x1, m) == (sigma >= math.sqrt(2.0) / eps)


@given(eps_small, sens)
def test_calibration_round_trip_laplace(eps, s):
    m = DpMechanism.laplace(eps, s)
    assert abs(calibrate_epsilon("laplace", noise_w1_cost(m), sensitivity=s) / eps - 1.0) < 1e-14


@given(eps_small, deltas, sens)
def test_calibration_round_trip_gaussian(eps, delta, s):
    m = DpMechanism.gaussian(eps, delta, s)
    got = calibrate_epsilon("gaussian", noise_w1_cost(m), delta=delta, sensitivity=s)
    assert abs(got / eps - 1.0) < 1e-13


def test_calibration_warns_outside_budget():
    with pytest.warns(PrivacyBudgetWarning):
        calibrate_epsilon("gaussian", 0.01, delta=0.01)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        calibrate_epsilon("laplace", 0.01)
    with pytest.raises(DomainError):
        calibrate_epsilon("gaussian", 1.0)
