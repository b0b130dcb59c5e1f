"""Sojourns above a level and the longest-intense-period statistic.

A period is a maximal interval on which the path stays strictly above the
level; its endpoints come from closed-form crossings of the linear segments,
so no sampling grid is involved.  A period still open at the horizon is
closed there and contributes its truncated length.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pathspace import PiecewisePath
from .reflect import QueuePath


@dataclass(frozen=True)
class IntensePeriodSet:
    """Ordered sojourn intervals ``(start, end)`` above ``level`` and their max length."""

    level: float
    periods: tuple[tuple[float, float], ...]
    longest: float

    @property
    def count(self) -> int:
        return len(self.periods)


def enumerate_periods(path: PiecewisePath | QueuePath, level: float) -> IntensePeriodSet:
    """All maximal intervals with ``path > level``, exactly, in time order.

    Values equal to the level do not count as above it, so a path touching
    the level ends one period there, and a new one may begin at the same
    instant if the path rises again.
    """
    if level < 0:
        raise ValueError(f"level must be >= 0, got {level}")
    if isinstance(path, QueuePath):
        path = path.path

    periods: list[tuple[float, float]] = []
    open_start: float | None = None

    def close(t: float) -> None:
        nonlocal open_start
        if open_start is not None and t > open_start:
            periods.append((open_start, t))
        open_start = None

    for t0, v0, slope, t1 in path.segments():
        # Settle the state at the segment start (a jump may have moved the
        # value across the level), then handle at most one crossing inside
        # the segment; a linear piece crosses the level at most once.
        if v0 > level:
            if open_start is None:
                open_start = t0
            if slope < 0.0:
                hit = t0 + (v0 - level) / (-slope)
                if hit < t1:
                    close(hit)
        elif v0 == level:
            close(t0)
            if slope > 0.0:
                open_start = t0
        else:
            close(t0)
            if slope > 0.0:
                hit = t0 + (level - v0) / slope
                if hit < t1:
                    open_start = hit

    close(path.horizon)
    longest = max((t - s for s, t in periods), default=0.0)
    return IntensePeriodSet(level=level, periods=tuple(periods), longest=longest)


def longest_intense(path: PiecewisePath | QueuePath, level: float) -> float:
    """Length of the longest sojourn strictly above ``level`` (0 if none)."""
    return enumerate_periods(path, level).longest
