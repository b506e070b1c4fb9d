import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cdmacap import (
    BracketError,
    ConvergenceError,
    DomainError,
    LoadNoisePoint,
    ParameterRangeError,
    capacity,
    capacity_sweep,
    free_energy,
    solve_saddle,
    zero_capacity_threshold,
)
from cdmacap.special import hazard

# (beta, kappa): (a*, t*, nats, bits), frozen from oracles.saddle at 50 digits
REFERENCE = {
    (0.01, 1.0): (1.0830350233348, 0.0, 0.1549240533734, 0.22350816351622),
    (1.0, 1.0): (2.1773447842001, 0.0, 0.11869056685905, 0.17123429220786),
    (0.1, 0.691): (1.1044626942209, -0.92978589557021, 0.52315295125652, 0.7547501684042),
    (0.1, 1.0): (1.2861441598722, 0.0, 0.14583268165685, 0.21039208662588),
    (1.0, 1.2): (2.3543716603606, 0.13034443230705, 0.031020953247902, 0.044753775414396),
    (0.1, 1.2): (1.4405999493831, 0.52693651894531, -0.21769267881351, 0.0),
    (0.25, 0.0): (1.0297483668801, -1.9708993203281, 0.66932868106647, 0.96563716889935),
    (0.5, 0.0): (1.1376496685127, -1.3258998623589, 0.60412517251429, 0.87156839046255),
    (1.0, 0.0): (1.4174911413164, -0.83992367569237, 0.49658910776351, 0.71642664312988),
    (1.0, 1.27): (2.4173902915468, 0.17365623356114, -0.00016376886914626, 0.0),
}


def test_point_validation():
    with pytest.raises(DomainError):
        LoadNoisePoint(0.0, 0.5)
    with pytest.raises(DomainError):
        LoadNoisePoint(1.0, -0.1)
    with pytest.raises(DomainError):
        LoadNoisePoint(math.inf, 0.5)
    assert LoadNoisePoint(0.5, 0).alpha == 2.0


@pytest.mark.parametrize("beta, kappa", [(0.0005, 0.5), (150.0, 0.5), (1.0, 2.5)])
def test_outside_supported_box(beta, kappa):
    with pytest.raises(ParameterRangeError):
        solve_saddle((beta, kappa))


def test_free_energy_examples():
    for beta in (0.01, 0.3, 7.0):
        assert free_energy(1.0, 0.0, (beta, 1.0)) == pytest.approx(0.0, abs=1e-15)
    assert free_energy(1.0830, 0.0, (0.01, 1.0)) == pytest.approx(0.154800109161, abs=1e-10)
    assert free_energy(2.3527, 0.0, (1.0, 1.2)) == pytest.approx(0.0307758435352, abs=1e-10)


def test_free_energy_domain():
    with pytest.raises(DomainError):
        free_energy(0.0, 0.0, (1.0, 1.0))
    with pytest.raises(DomainError):
        free_energy(-1.0, 0.0, (1.0, 1.0))


@pytest.mark.parametrize("key", sorted(REFERENCE))
def test_saddle_and_capacity_against_oracle(key):
    a_ref, t_ref, nats_ref, bits_ref = REFERENCE[key]
    res = capacity(key)
    assert res.saddle.a_star == pytest.approx(a_ref, rel=1e-11)
    assert res.saddle.t_star == pytest.approx(t_ref, abs=1e-11)
    assert res.nats == pytest.approx(nats_ref, abs=1e-11)
    assert res.bits == pytest.approx(bits_ref, abs=1e-11)
    assert res.clamped == (nats_ref < 0)


def test_live_oracle_spot_check():
    for beta, kappa in [(0.003, 0.4), (3.0, 1.6), (42.0, 0.1)]:
        a_ref, _ = oracles.saddle(beta, kappa)
        sol = solve_saddle((beta, kappa))
        assert sol.a_star == pytest.approx(float(a_ref), rel=1e-10)
        assert capacity((beta, kappa)).nats == pytest.approx(
            float(oracles.capacity_nats(beta, kappa)), abs=1e-10)


def test_small_load_noiseless_near_one_bit():
    assert capacity((0.01, 0.0)).bits >= 0.99


@settings(max_examples=150, deadline=None)
@given(
    st.floats(min_value=0.001, max_value=100.0),
    st.floats(min_value=0.0, max_value=2.0),
)
def test_saddle_invariants(beta, kappa):
    sol = solve_saddle((beta, kappa))
    assert sol.b_star == 0.0
    # a* - 1 = sqrt(a beta) hazard(t) can be below double resolution (beta small, kappa 0)
    increment = math.sqrt(sol.a_star * beta) * hazard(sol.t_star)
    assert sol.a_star >= 1.0
    assert sol.a_star > 1.0 or increment < 1e-16
    assert sol.t_star == pytest.approx((kappa - 1) / math.sqrt(sol.a_star * beta), abs=1e-12)
    recomputed = abs(sol.a_star - 1 - math.sqrt(sol.a_star * beta) * hazard(sol.t_star))
    assert sol.residual <= 1e-12
    assert recomputed <= 1e-12

    res = capacity((beta, kappa))
    assert 0.0 <= res.bits <= 1.0 + 1e-9
    assert res.clamped == (res.nats < 0)
    assert res.bits == pytest.approx(max(0.0, res.nats) / math.log(2), abs=0)

    # stationarity of the exponent in b at b* = 0
    h = 1e-6
    point = LoadNoisePoint(beta, kappa)
    d = (free_energy(sol.a_star, h, point) - free_energy(sol.a_star, -h, point)) / (2 * h)
    assert abs(d) <= 1e-5


def test_convergence_error_carries_state():
    with pytest.raises(ConvergenceError) as exc:
        solve_saddle((100.0, 0.0), max_iter=3)
    assert exc.value.iterations == 3
    assert exc.value.residual > 1e-12
    assert exc.value.last_iterate > 1.0


@pytest.mark.parametrize("beta", [0.01, 0.1, 1.0])
def test_monotone_in_kappa(beta):
    bits = [capacity((beta, k)).bits for k in (0, 0.25, 0.5, 0.75, 0.9, 1, 1.05)]
    assert all(b2 <= b1 for b1, b2 in zip(bits, bits[1:]))


def test_monotone_in_beta_noiseless():
    bits = [capacity((float(b), 0.0)).bits for b in np.geomspace(0.01, 10, 60)]
    assert all(b2 <= b1 for b1, b2 in zip(bits, bits[1:]))


def test_crossing_regime():
    assert capacity((1.0, 1.2)).bits > capacity((0.1, 1.2)).bits == 0.0


# thresholds frozen from oracles.threshold (50-digit bisection)
@pytest.mark.parametrize("beta, kappa0", [(0.01, 1.0270065798), (0.1, 1.08577640085),
                                          (1.0, 1.26963373351)])
def test_zero_capacity_threshold(beta, kappa0):
    k = zero_capacity_threshold(beta)
    assert abs(k - kappa0) <= 1e-6
    assert capacity((beta, k - 1e-5)).nats > 0 > capacity((beta, k + 1e-5)).nats


def test_threshold_bracket_error_at_heavy_load():
    # for beta around 20 and above the crossing moves past kappa = 2
    with pytest.raises(BracketError) as exc:
        zero_capacity_threshold(50.0)
    assert exc.value.value_hi > 0


def test_sweep_order_and_values():
    rows = capacity_sweep([0.1, 1.0], [1.2])
    assert [(r.beta, r.kappa) for r in rows] == [(0.1, 1.2), (1.0, 1.2)]
    assert rows[0].result.bits == 0.0 and rows[0].result.clamped
    assert rows[1].result.bits == pytest.approx(0.044753775414396, abs=1e-9)

    rows = capacity_sweep([0.1, 1.0], [0.0, 1.0], kappa_major=True)
    assert [(r.beta, r.kappa) for r in rows] == [(0.1, 0.0), (1.0, 0.0), (0.1, 1.0), (1.0, 1.0)]
    assert capacity_sweep([0.1], [1.0])[0].result.bits == pytest.approx(0.210392, abs=1e-6)


def test_sweep_flags_nonconverged_rows():
    rows = capacity_sweep([0.01, 100.0], [0.0], max_iter=5)
    assert rows[0].ok
    assert not rows[1].ok and "did not reach" in rows[1].error


def test_sweep_workers_same_result():
    betas = list(np.geomspace(0.01, 10, 12))
    kappas = [0.0, 0.5, 1.0, 1.1]
    serial = capacity_sweep(betas, kappas)
    threaded = capacity_sweep(betas, kappas, workers=4)
    assert serial == threaded


def test_sweep_rejects_empty_grid():
    with pytest.raises(DomainError):
        capacity_sweep([], [0.0])


def test_damping_rescues_oscillating_map(monkeypatch):
    import cdmacap.saddle as sd

    # slope -1.5 at the fixed point a = 1.6: plain iteration diverges
    monkeypatch.setattr(sd, "_fixed_point_map", lambda a, beta, kappa: (4.0 - 1.5 * a, 0.0))
    sol = sd.solve_saddle((1.0, 0.5), tol=1e-12)
    assert sol.a_star == pytest.approx(1.6, abs=1e-11)
    assert sol.residual <= 1e-12
