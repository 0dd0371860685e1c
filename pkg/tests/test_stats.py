"""Running moments and confidence radii."""
import math
import statistics

import pytest

from valucb.stats import (
    ArmState,
    ConfidenceBounds,
    bounds_from_state,
    radius_bounded,
    radius_subg_mean,
    radius_subg_var,
)


def _state(xs):
    s = ArmState()
    for x in xs:
        s.update(x)
    return s


def test_welford_two_point():
    s = _state([0.0, 1.0])
    assert s.pulls == 2
    assert s.mean == 0.5
    assert s.variance == 0.5


def test_welford_matches_batch():
    xs = [0.2, 0.4, 0.9]
    s = _state(xs)
    assert s.mean == pytest.approx(0.5, rel=1e-15)
    assert s.variance == pytest.approx(0.13, rel=1e-12)
    assert s.variance == pytest.approx(statistics.variance(xs), rel=1e-12)


def test_welford_constant_stream():
    s = _state([0.3] * 50)
    assert s.mean == pytest.approx(0.3, rel=1e-15)
    assert s.variance == pytest.approx(0.0, abs=1e-18)


def test_variance_needs_two_pulls():
    s = ArmState()
    with pytest.raises(ValueError, match="insufficient samples"):
        s.variance
    s.update(0.5)
    with pytest.raises(ValueError, match="insufficient samples"):
        s.variance


def test_radius_bounded_example():
    assert radius_bounded(3, 2, 2, 0.1) == 1.4215597603324996


def test_radius_bounded_monotonicity():
    base = radius_bounded(10, 5, 3, 0.05)
    assert radius_bounded(11, 5, 3, 0.05) > base
    assert radius_bounded(10, 6, 3, 0.05) < base
    assert radius_bounded(10, 5, 3, 0.01) > base
    # quadrupling the pull count halves the radius
    assert radius_bounded(10, 20, 3, 0.05) == pytest.approx(base / 2.0, rel=1e-15)


def test_radius_subg_mean_example():
    assert radius_subg_mean(2, 1, 2, 0.1, 1.0) == pytest.approx(
        3.594848585505019, rel=1e-15
    )
    assert radius_subg_mean(2, 1, 2, 0.1, 1.0) == pytest.approx(
        math.sqrt(2.0 * math.log(640.0)), rel=1e-12
    )


def test_radius_subg_var_is_eight_sigma_times_mean():
    for sigma in (0.3, 0.5, 1.0, 2.0):
        rm = radius_subg_mean(9, 4, 5, 0.05, sigma)
        rv = radius_subg_var(9, 4, 5, 0.05, sigma)
        assert rv == pytest.approx(8.0 * sigma * rm, rel=1e-12)


def test_radius_subg_scaling_in_sigma():
    rm1 = radius_subg_mean(9, 4, 5, 0.05, 0.4)
    rm2 = radius_subg_mean(9, 4, 5, 0.05, 0.8)
    assert rm2 == pytest.approx(2.0 * rm1, rel=1e-12)
    rv1 = radius_subg_var(9, 4, 5, 0.05, 0.4)
    rv2 = radius_subg_var(9, 4, 5, 0.05, 0.8)
    assert rv2 == pytest.approx(4.0 * rv1, rel=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(t=0, pulls=2, n_arms=2, delta=0.1),
        dict(t=3, pulls=0, n_arms=2, delta=0.1),
        dict(t=3, pulls=2, n_arms=1, delta=0.1),
        dict(t=3, pulls=2, n_arms=2, delta=0.0),
        dict(t=3, pulls=2, n_arms=2, delta=1.0),
    ],
)
def test_radius_argument_validation(kwargs):
    with pytest.raises(ValueError):
        radius_bounded(**kwargs)
    with pytest.raises(ValueError):
        radius_subg_mean(sigma=1.0, **kwargs)
    with pytest.raises(ValueError):
        radius_subg_var(sigma=1.0, **kwargs)


def test_subg_radius_rejects_bad_sigma():
    with pytest.raises(ValueError, match="sigma"):
        radius_subg_mean(3, 2, 2, 0.1, 0.0)
    with pytest.raises(ValueError, match="sigma"):
        radius_subg_var(3, 2, 2, 0.1, -1.0)


def test_bounds_from_state():
    s = _state([0.2, 0.4, 0.9])
    b = bounds_from_state(s, 0.1, 0.2)
    assert b.l_mu == pytest.approx(0.4, rel=1e-12)
    assert b.u_mu == pytest.approx(0.6, rel=1e-12)
    assert b.l_var == pytest.approx(-0.07, rel=1e-12)  # unclamped below zero
    assert b.u_var == pytest.approx(0.33, rel=1e-12)


def test_bounds_from_state_needs_two_pulls():
    s = _state([0.5])
    with pytest.raises(ValueError, match="insufficient samples"):
        bounds_from_state(s, 0.1, 0.1)


def test_inverted_bounds_rejected():
    with pytest.raises(ValueError, match="inverted"):
        ConfidenceBounds(l_mu=0.6, u_mu=0.4, l_var=0.0, u_var=0.1)
    with pytest.raises(ValueError, match="inverted"):
        ConfidenceBounds(l_mu=0.4, u_mu=0.6, l_var=0.2, u_var=0.1)
