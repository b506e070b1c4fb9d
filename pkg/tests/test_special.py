import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cdmacap import DomainError
from cdmacap.special import gaussian_tail, hazard, inverse_gaussian_tail, log_two_tail


# values frozen from oracles.tail_quad / oracles.hazard at 50 digits
@pytest.mark.parametrize(
    "x, expected",
    [
        (0.0, 0.5),
        (1.0, 0.1586552539314571),
        (3.0902, 0.001000108783207072),
        (-7.0, 0.99999999999872018746),
        (8.0, 6.220960574271784e-16),
        (37.0, 5.725571222524577e-300),
    ],
)
def test_gaussian_tail_frozen(x, expected):
    assert gaussian_tail(x) == pytest.approx(expected, rel=1e-12)


def test_gaussian_tail_against_quadrature_grid():
    for x in np.linspace(-8, 8, 33):
        ref = float(oracles.tail_quad(x))
        assert abs(gaussian_tail(x) - ref) <= 1e-12 * ref


def test_gaussian_tail_no_underflow_to_37():
    assert gaussian_tail(37.0) > 0


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_non_finite_rejected(bad):
    for fn in (gaussian_tail, hazard, log_two_tail):
        with pytest.raises(DomainError):
            fn(bad)


def test_symmetry():
    xs = np.linspace(-8, 8, 4001)
    err = max(abs(gaussian_tail(x) + gaussian_tail(-x) - 1.0) for x in xs)
    assert err <= 1e-14


def test_strictly_decreasing():
    vals = [gaussian_tail(x) for x in np.linspace(-8, 37, 2000)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_inverse_examples():
    assert inverse_gaussian_tail(0.5) == 0.0
    assert inverse_gaussian_tail(1e-3) == pytest.approx(3.090232306167814, abs=1e-12)
    assert inverse_gaussian_tail(gaussian_tail(1.7)) == pytest.approx(1.7, abs=1e-9)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_inverse_domain(p):
    with pytest.raises(DomainError):
        inverse_gaussian_tail(p)


@given(st.floats(min_value=1e-300, max_value=1 - 1e-12))
def test_inverse_postcondition(p):
    x = inverse_gaussian_tail(p)
    assert abs(gaussian_tail(x) - p) <= 1e-10 * p


@given(st.floats(min_value=-5.0, max_value=30.0))
def test_inverse_round_trip_in_x(x):
    # below about -5 the map p -> x loses digits because Q(x) rounds near 1
    assert inverse_gaussian_tail(gaussian_tail(x)) == pytest.approx(x, abs=1e-9)


@pytest.mark.parametrize(
    "t, expected",
    [
        (0.0, 0.7978845608028654),
        (-10.0, 7.694598626706419e-23),
        (8.5, 8.614595320165173),
        (30.0, 30.03325966743368),
        (50.0, 50.01998403190564),
        (100.0, 100.0099980009993),
    ],
)
def test_hazard_frozen(t, expected):
    assert hazard(t) == pytest.approx(expected, rel=1e-12)


@given(st.floats(min_value=-37.0, max_value=100.0))
def test_hazard_exceeds_max_zero_t(t):
    assert hazard(t) > max(0.0, t)


def test_hazard_asymptote():
    # hazard(t) = t + 1/t - 2/t^3 + ...
    assert hazard(30.0) == pytest.approx(30.0 + 1 / 30.0, rel=1e-3)
    gaps = [hazard(t) - t for t in (10.0, 30.0, 100.0)]
    assert gaps[0] > gaps[1] > gaps[2] > 0


@pytest.mark.parametrize(
    "t, expected",
    [
        (1.0, -1.147874464449318),
        (30.0, -453.6280967757833),
        (37.0, -688.3374383963306),
    ],
)
def test_log_two_tail_frozen(t, expected):
    assert log_two_tail(t) == pytest.approx(expected, rel=1e-12)


def test_log_two_tail_limits():
    assert log_two_tail(0.0) == 0.0
    assert abs(log_two_tail(-10.0) - math.log(2)) <= 1e-15
    assert math.isfinite(log_two_tail(37.0))


@given(st.floats(min_value=-8.0, max_value=8.0))
def test_log_two_tail_consistent(t):
    assert math.exp(log_two_tail(t)) == pytest.approx(2 * gaussian_tail(t), rel=1e-12)
