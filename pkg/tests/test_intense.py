import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lipq import (
    JumpSpec,
    PiecewisePath,
    enumerate_periods,
    h_j_path,
    longest_intense,
    queue_path_from_arrivals,
    replicate_arrivals,
    skorohod_reflect,
)
from _oracles import grid_scan_periods


def test_path_below_level_has_no_periods():
    path = h_j_path(JumpSpec(times=(0.5,), sizes=(1.0,)), 2.0)
    ps = enumerate_periods(path, 5.0)
    assert ps.periods == ()
    assert ps.longest == 0.0


def test_single_jump_period_with_linear_exit():
    # flat at 0, jump J at t0, then steady decline: the period ends where the
    # line crosses the level
    t0, jump, slope, level, horizon = 1.0, 6.0, 0.5, 2.0, 20.0
    path = PiecewisePath([(0.0, 0.0, 0.0), (t0, jump, -slope)], horizon)
    ps = enumerate_periods(path, level)
    assert ps.count == 1
    s, t = ps.periods[0]
    assert s == t0
    assert t == pytest.approx(t0 + (jump - level) / slope)
    assert ps.longest == pytest.approx((jump - level) / slope)


def test_period_truncated_at_horizon():
    t0, jump, slope, level, horizon = 1.0, 6.0, 0.5, 2.0, 4.0
    path = PiecewisePath([(0.0, 0.0, 0.0), (t0, jump, -slope)], horizon)
    ps = enumerate_periods(path, level)
    assert ps.periods == ((t0, horizon),)
    assert ps.longest == pytest.approx(horizon - t0)


def test_zero_path_has_zero_longest():
    path = PiecewisePath([(0.0, 0.0, 0.0)], 5.0)
    assert longest_intense(path, 1.0) == 0.0


def test_touching_level_splits_periods():
    # dips to exactly the level and rises again: strict inequality separates
    # the two sojourns at the touch point
    level = 1.0
    path = PiecewisePath([(0.0, 2.0 + 0.0, 0.0)], 1.0)  # placeholder replaced below
    path = PiecewisePath(
        [(0.0, 2.0, -1.0), (1.0, 1.0, 1.0)],
        2.0,
    )
    ps = enumerate_periods(path, level)
    assert ps.periods == ((0.0, 1.0), (1.0, 2.0))
    assert ps.longest == 1.0


def test_flat_at_level_not_intense():
    path = PiecewisePath([(0.0, 2.0, -1.0), (1.0, 1.0, 0.0), (3.0, 1.0, 1.0)], 5.0)
    ps = enumerate_periods(path, 1.0)
    # above on [0,1), flat at the level on [1,3) (not intense), rising after 3
    assert ps.periods == ((0.0, 1.0), (3.0, 5.0))


def test_two_planted_jumps_reach_double_cap():
    # buffer-filling jump, then a jump of the spare headroom exactly one cap
    # later: one contiguous sojourn of twice the single-jump cap (dyadic
    # constants so the touch point is exact in floating point)
    buffer, theta, drain = 2000.0, 0.75, 0.5
    level = theta * buffer
    cap = (1.0 - theta) * buffer / drain
    u1 = 100.0
    horizon = 2.5 * cap + u1
    spec = JumpSpec(
        times=(u1, u1 + cap),
        sizes=(buffer, (1.0 - theta) * buffer),
        drift=-drain,
    )
    qp = skorohod_reflect(h_j_path(spec, horizon), buffer)
    ps = enumerate_periods(qp, level)
    assert ps.count == 1
    assert ps.longest == pytest.approx(2 * cap, rel=1e-12)
    assert longest_intense(qp, level) == ps.longest


def test_two_planted_jumps_near_double_cap_generic_theta():
    # same construction at a non-dyadic threshold: second jump lands just
    # before the crossing, so the sojourn closes within rounding of 2*cap
    buffer, theta, drain = 2000.0, 0.85, 0.5
    level = theta * buffer
    cap = (1.0 - theta) * buffer / drain
    gap = cap * (1.0 - 1e-9)
    u1 = 100.0
    spec = JumpSpec(
        times=(u1, u1 + gap),
        sizes=(buffer, buffer),
        drift=-drain,
    )
    qp = skorohod_reflect(h_j_path(spec, 5000.0), buffer)
    assert longest_intense(qp, level) == pytest.approx(gap + cap, rel=1e-9)


def test_one_jump_family_bounded_by_cap():
    buffer, theta, drain = 100.0, 0.85, 0.5
    level = theta * buffer
    cap = (1.0 - theta) * buffer / drain
    horizon = 10 * cap
    for size in (level + 0.1, 0.95 * buffer, buffer, 10 * buffer):
        for t0 in (0.5, horizon / 2, horizon - cap / 3):
            spec = JumpSpec(times=(t0,), sizes=(size,), drift=-drain)
            qp = skorohod_reflect(h_j_path(spec, horizon), buffer)
            assert longest_intense(qp, level) <= cap + 1e-9


def test_longest_nonincreasing_in_level(desk_dist):
    arrivals = replicate_arrivals(desk_dist, 200, 31, 4)
    qp = queue_path_from_arrivals(arrivals, 30.0, 1.0, 200.0)
    levels = np.linspace(0.5, 29.5, 30)
    longs = [longest_intense(qp, float(lv)) for lv in levels]
    assert all(a >= b - 1e-12 for a, b in zip(longs, longs[1:]))


def test_periods_are_ordered_and_positive(desk_dist):
    arrivals = replicate_arrivals(desk_dist, 300, 8, 1)
    qp = queue_path_from_arrivals(arrivals, 20.0, 1.0, 300.0)
    ps = enumerate_periods(qp, 10.0)
    flat = [t for period in ps.periods for t in period]
    assert all(a <= b for a, b in zip(flat, flat[1:]))
    assert all(t > s for s, t in ps.periods)
    assert ps.longest == max((t - s for s, t in ps.periods), default=0.0)


def test_level_must_be_nonnegative(desk_dist):
    arrivals = replicate_arrivals(desk_dist, 10, 0, 0)
    qp = queue_path_from_arrivals(arrivals, 5.0, 1.0, 10.0)
    with pytest.raises(ValueError):
        enumerate_periods(qp, -0.5)


def test_agrees_with_grid_scan_oracle(desk_dist):
    # exact crossings vs a dense scan; periods shorter than the grid step are
    # invisible to the scan and excused on both sides
    step = 1e-3
    checked = 0
    for rep in range(40):
        arrivals = replicate_arrivals(desk_dist, 50, 1000, rep)
        qp = queue_path_from_arrivals(arrivals, 8.0, 1.0, 50.0)
        exact = enumerate_periods(qp, 4.0)
        approx_periods, approx_longest = grid_scan_periods(qp.path, 4.0, step)
        exact_long = [p for p in exact.periods if p[1] - p[0] > 2 * step]
        approx_long = [p for p in approx_periods if p[1] - p[0] > 2 * step]
        assert len(exact_long) == len(approx_long)
        for (s1, t1), (s2, t2) in zip(exact_long, approx_long):
            assert abs(s1 - s2) <= step
            assert abs(t1 - t2) <= step
        if exact.longest > 2 * step:
            assert abs(exact.longest - approx_longest) <= 2 * step
            checked += 1
    assert checked >= 10  # the comparison must have had real content


def test_exceedance_set_matches_periods(desk_dist):
    # membership agreement on a fine grid, away from period boundaries
    arrivals = replicate_arrivals(desk_dist, 80, 3000, 2)
    qp = queue_path_from_arrivals(arrivals, 10.0, 1.0, 80.0)
    level = 5.0
    ps = enumerate_periods(qp, level)
    ts = np.linspace(0.0, 80.0, 4001)
    vals = qp.path.value_array(ts)
    inside = np.zeros(ts.size, dtype=bool)
    for s, t in ps.periods:
        inside |= (ts > s) & (ts < t)
    margin = 0.05
    near_boundary = np.zeros(ts.size, dtype=bool)
    for s, t in ps.periods:
        near_boundary |= (np.abs(ts - s) < margin) | (np.abs(ts - t) < margin)
    check = ~near_boundary
    assert np.array_equal(vals[check] > level, inside[check])


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 100_000), level=st.floats(0.5, 7.5))
def test_longest_matches_enumerate(desk_dist, seed, level):
    arrivals = replicate_arrivals(desk_dist, 60, seed, 0)
    qp = queue_path_from_arrivals(arrivals, 8.0, 1.0, 60.0)
    assert longest_intense(qp, level) == enumerate_periods(qp, level).longest
