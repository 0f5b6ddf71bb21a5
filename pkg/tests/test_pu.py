import random

import pytest
from hypothesis import given, strategies as st

from dsatmac.pu import (
    PuIdle,
    PuMarkov,
    PuScripted,
    PuTrajectory,
    markov_intervals,
)


def scripted(*intervals):
    model = PuScripted(tuple(intervals))
    return PuTrajectory(model, random.Random(0), horizon_us=10**9)


def test_idle_channel_is_never_busy():
    traj = PuTrajectory(PuIdle(), random.Random(0), horizon_us=10**6)
    assert not traj.busy_at(0)
    assert not traj.busy_in(0, 10**6)
    assert traj.next_idle(123) == 123
    assert traj.changes() == []


def test_scripted_intervals_are_half_open():
    traj = scripted((100, 200))
    assert not traj.busy_at(99)
    assert traj.busy_at(100)
    assert traj.busy_at(199)
    assert not traj.busy_at(200)


def test_window_overlap_edges():
    traj = scripted((100, 200))
    assert not traj.busy_in(0, 100)      # window ends where busy starts
    assert not traj.busy_in(200, 300)    # window starts where busy ends
    assert traj.busy_in(0, 101)
    assert traj.busy_in(199, 500)
    assert traj.busy_in(150, 160)        # window inside the interval
    assert traj.busy_in(0, 10**6)        # interval inside the window


def test_next_idle_skips_touching_intervals():
    traj = scripted((100, 200), (200, 300), (500, 600))
    assert traj.next_idle(0) == 0
    assert traj.next_idle(100) == 300
    assert traj.next_idle(250) == 300
    assert traj.next_idle(550) == 600
    assert traj.next_idle(600) == 600


def test_changes_lists_every_edge_in_order():
    traj = scripted((100, 200), (500, 600))
    assert traj.changes() == [(100, True), (200, False), (500, True), (600, False)]


def test_scripted_validation():
    with pytest.raises(ValueError, match="bad busy interval"):
        PuScripted(((100, 100),))
    with pytest.raises(ValueError, match="sorted and disjoint"):
        PuScripted(((100, 300), (200, 400)))
    PuScripted(((100, 200), (200, 300)))  # touching is allowed


def test_markov_validation_and_duty():
    with pytest.raises(ValueError):
        PuMarkov(0, 100)
    model = PuMarkov(mean_on_us=30, mean_off_us=70)
    assert model.duty_cycle == pytest.approx(0.3)


def test_markov_sampling_is_deterministic_per_seed():
    model = PuMarkov(40_000, 160_000)
    a = markov_intervals(model, random.Random(7), 10**6)
    b = markov_intervals(model, random.Random(7), 10**6)
    c = markov_intervals(model, random.Random(8), 10**6)
    assert a == b
    assert a != c


def test_markov_intervals_are_disjoint_ascending_and_start_idle():
    model = PuMarkov(20_000, 80_000)
    intervals = markov_intervals(model, random.Random(3), 2 * 10**6)
    assert intervals[0][0] > 0
    last_end = 0
    for start, end in intervals:
        assert start >= last_end and end > start
        last_end = end
    assert last_end > 2 * 10**6  # covers the horizon


def test_markov_long_run_duty_cycle_matches_the_model():
    model = PuMarkov(30_000, 70_000)
    horizon = 200 * 10**6
    traj = PuTrajectory(model, random.Random(11), horizon)
    busy = sum(min(end, horizon) - start
               for start, end in traj.intervals if start < horizon)
    assert busy / horizon == pytest.approx(model.duty_cycle, rel=0.05)


@given(
    raw=st.lists(st.tuples(st.integers(0, 5000), st.integers(1, 400)),
                 min_size=1, max_size=12),
    window=st.tuples(st.integers(0, 6000), st.integers(1, 800)),
)
def test_busy_in_agrees_with_a_linear_scan(raw, window):
    intervals = []
    t = 0
    for gap, width in raw:
        start = t + gap
        intervals.append((start, start + width))
        t = start + width
    traj = scripted(*intervals)
    ws, width = window
    we = ws + width
    expected = any(s < we and e > ws for s, e in intervals)
    assert traj.busy_in(ws, we) == expected
