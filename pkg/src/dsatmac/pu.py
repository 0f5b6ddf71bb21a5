"""Primary-user activity models.

A channel's licensed owner is modelled as a busy/idle process. Three
flavours cover every scenario need:

* ``PuIdle``: never busy.
* ``PuScripted``: an explicit list of busy intervals, for hand-built
  tests.
* ``PuMarkov``: a two-state process with exponentially distributed
  holding times, seeded per channel so runs replay exactly.

``PuTrajectory`` materialises a model lazily into a sorted list of busy
intervals, which gives both the event-driven kernel and the baseline MAC
one query surface: busy now, busy anywhere in a window, next idle time.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass


@dataclass(frozen=True)
class PuIdle:
    pass


@dataclass(frozen=True)
class PuScripted:
    # Busy intervals [start_us, end_us), non-overlapping and sorted.
    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        last_end = -1
        for start, end in self.intervals:
            if start < 0 or end <= start:
                raise ValueError(f"bad busy interval [{start}, {end})")
            if start < last_end:
                raise ValueError("busy intervals must be sorted and disjoint")
            last_end = end


@dataclass(frozen=True)
class PuMarkov:
    mean_on_us: int
    mean_off_us: int

    def __post_init__(self) -> None:
        if self.mean_on_us <= 0 or self.mean_off_us <= 0:
            raise ValueError("markov holding means must be positive")

    @property
    def duty_cycle(self) -> float:
        return self.mean_on_us / (self.mean_on_us + self.mean_off_us)


PuModel = PuIdle | PuScripted | PuMarkov


def markov_intervals(model: PuMarkov, rng: random.Random, horizon_us: int) -> list[tuple[int, int]]:
    """Sample busy intervals of a two-state process starting idle at t=0.

    Holding times are exponential with the configured means, rounded to
    the microsecond grid (minimum one microsecond so state always
    advances).
    """
    intervals: list[tuple[int, int]] = []
    t = 0
    while t <= horizon_us:
        off = max(1, round(rng.expovariate(1.0 / model.mean_off_us)))
        on = max(1, round(rng.expovariate(1.0 / model.mean_on_us)))
        start = t + off
        intervals.append((start, start + on))
        t = start + on
    return intervals


class PuTrajectory:
    """A concrete busy/idle timeline for one channel and one seed."""

    def __init__(self, model: PuModel, rng: random.Random, horizon_us: int):
        self.model = model
        if isinstance(model, PuIdle):
            self.intervals: list[tuple[int, int]] = []
        elif isinstance(model, PuScripted):
            self.intervals = list(model.intervals)
        else:
            self.intervals = markov_intervals(model, rng, horizon_us)
        self._starts = [start for start, _ in self.intervals]

    def busy_at(self, t: int) -> bool:
        return self.busy_in(t, t + 1)

    def busy_in(self, window_start: int, window_end: int) -> bool:
        """True if any busy time overlaps [window_start, window_end).

        Intervals are sorted and disjoint, so the only one that can
        overlap is the last to start before the window closes.
        """
        i = bisect_right(self._starts, window_end - 1) - 1
        return i >= 0 and self.intervals[i][1] > window_start

    def next_idle(self, t: int) -> int:
        """Earliest time >= t at which the channel is idle."""
        while True:
            i = bisect_right(self._starts, t) - 1
            if i >= 0 and self.intervals[i][1] > t:
                # scripted intervals may touch, so re-test the landing point
                t = self.intervals[i][1]
            else:
                return t

    def changes(self) -> list[tuple[int, bool]]:
        """(time, busy) state-change points, for event scheduling and traces."""
        out: list[tuple[int, bool]] = []
        for start, end in self.intervals:
            out.append((start, True))
            out.append((end, False))
        return out
