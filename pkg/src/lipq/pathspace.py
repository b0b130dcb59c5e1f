"""Piecewise-linear cadlag paths with exact jump bookkeeping.

A path on ``[0, horizon]`` is a right-continuous sequence of linear segments
``(start, value, slope)``; jump discontinuities sit at segment boundaries.
Everything downstream (reflection, level crossings, intense periods) is
computed in closed form from this representation, so there is no grid
resolution anywhere in the pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np


@dataclass(frozen=True)
class JumpSpec:
    """Jump times/sizes plus a constant drift; times strictly increasing."""

    times: tuple[float, ...]
    sizes: tuple[float, ...]
    drift: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        object.__setattr__(self, "sizes", tuple(float(z) for z in self.sizes))
        if len(self.times) != len(self.sizes):
            raise ValueError("times and sizes must have equal length")
        if any(t2 <= t1 for t1, t2 in zip(self.times, self.times[1:])):
            raise ValueError("jump times must be strictly increasing")
        if any(t < 0 for t in self.times):
            raise ValueError("jump times must be >= 0")
        if any(z == 0.0 for z in self.sizes):
            raise ValueError("jump sizes must be nonzero")

    @property
    def count(self) -> int:
        return len(self.times)


class PiecewisePath:
    """Right-continuous piecewise-linear path on ``[0, horizon]``.

    Immutable after construction; the backing arrays are marked read-only so
    instances can be shared freely across threads.
    """

    __slots__ = ("horizon", "starts", "values", "slopes")

    def __init__(self, segments: Iterable[tuple[float, float, float]], horizon: float):
        seg = list(segments)
        if not seg:
            raise ValueError("path needs at least one segment")
        if not horizon > 0:
            raise ValueError(f"horizon must be > 0, got {horizon}")
        starts = np.asarray([s[0] for s in seg], dtype=float)
        values = np.asarray([s[1] for s in seg], dtype=float)
        slopes = np.asarray([s[2] for s in seg], dtype=float)
        self._init_from_arrays(starts, values, slopes, float(horizon))

    @classmethod
    def from_arrays(cls, starts, values, slopes, horizon: float) -> "PiecewisePath":
        path = object.__new__(cls)
        path._init_from_arrays(
            np.asarray(starts, dtype=float),
            np.asarray(values, dtype=float),
            np.asarray(slopes, dtype=float),
            float(horizon),
        )
        return path

    def _init_from_arrays(self, starts, values, slopes, horizon) -> None:
        if starts.size == 0:
            raise ValueError("path needs at least one segment")
        if starts[0] != 0.0:
            raise ValueError("first segment must start at time 0")
        if np.any(np.diff(starts) <= 0):
            raise ValueError("segment start times must be strictly increasing")
        if starts[-1] > horizon:
            raise ValueError("segment starts must lie within [0, horizon]")
        for a in (starts, values, slopes):
            a.setflags(write=False)
        object.__setattr__(self, "horizon", horizon)
        object.__setattr__(self, "starts", starts)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "slopes", slopes)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("PiecewisePath is immutable")

    @property
    def n_segments(self) -> int:
        return self.starts.size

    def _index(self, t: float) -> int:
        if t < 0 or t > self.horizon:
            raise ValueError(f"t={t} outside [0, {self.horizon}]")
        return int(np.searchsorted(self.starts, t, side="right")) - 1

    def value(self, t: float) -> float:
        """Path value at ``t`` (right-continuous)."""
        i = self._index(t)
        return float(self.values[i] + self.slopes[i] * (t - self.starts[i]))

    def value_array(self, ts) -> np.ndarray:
        """Vectorised evaluation on a sorted or unsorted array of times."""
        ts = np.asarray(ts, dtype=float)
        if np.any(ts < 0) or np.any(ts > self.horizon):
            raise ValueError("times outside [0, horizon]")
        idx = np.searchsorted(self.starts, ts, side="right") - 1
        return self.values[idx] + self.slopes[idx] * (ts - self.starts[idx])

    def left_limit(self, t: float) -> float:
        """Limit of the path from the left; at ``t=0`` the implicit value 0."""
        if t == 0.0:
            return 0.0
        i = int(np.searchsorted(self.starts, t, side="left")) - 1
        if t > self.horizon:
            raise ValueError(f"t={t} outside [0, {self.horizon}]")
        return float(self.values[i] + self.slopes[i] * (t - self.starts[i]))

    @property
    def end_value(self) -> float:
        return self.value(self.horizon)

    def segments(self) -> Iterator[tuple[float, float, float, float]]:
        """Yield ``(start, value, slope, end)`` with ``end`` the next start or horizon."""
        starts = self.starts
        values = self.values
        slopes = self.slopes
        n = starts.size
        for i in range(n):
            end = starts[i + 1] if i + 1 < n else self.horizon
            yield float(starts[i]), float(values[i]), float(slopes[i]), float(end)

    def jumps(self) -> list[tuple[float, float]]:
        """Discontinuities as ``(time, size)``; the value before t=0 is taken as 0."""
        out: list[tuple[float, float]] = []
        prev_end = 0.0
        for i in range(self.starts.size):
            size = float(self.values[i]) - prev_end
            if size != 0.0:
                out.append((float(self.starts[i]), size))
            end = self.starts[i + 1] if i + 1 < self.starts.size else self.horizon
            prev_end = float(self.values[i] + self.slopes[i] * (end - self.starts[i]))
        return out

    def rescale(self, time_div: float, value_div: float) -> "PiecewisePath":
        """New path with times divided by ``time_div`` and values by ``value_div``."""
        if time_div <= 0 or value_div <= 0:
            raise ValueError("divisors must be positive")
        return PiecewisePath.from_arrays(
            self.starts / time_div,
            self.values / value_div,
            self.slopes * (time_div / value_div),
            self.horizon / time_div,
        )

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"PiecewisePath(n_segments={self.n_segments}, horizon={self.horizon})"


def embed_walk(increments, horizon: float) -> PiecewisePath:
    """Step-path embedding of a walk: value ``S_i`` held on ``[i*h/n, (i+1)*h/n)``.

    The path is 0 on the first subinterval and reaches ``S_n`` exactly at the
    horizon via a degenerate final segment.
    """
    inc = np.asarray(increments, dtype=float)
    if inc.size == 0:
        raise ValueError("increment vector must be nonempty")
    n = inc.size
    partial = np.cumsum(inc)
    starts = np.arange(n + 1, dtype=float) * (float(horizon) / n)
    values = np.concatenate(([0.0], partial))
    slopes = np.zeros(n + 1)
    return PiecewisePath.from_arrays(starts, values, slopes, float(horizon))


def h_j_path(spec: JumpSpec, horizon: float) -> PiecewisePath:
    """Drifting step path: ``sum_i z_i * 1{u_i <= t} + drift * t``.

    An empty spec gives the pure drift line.
    """
    if spec.times and spec.times[-1] > horizon:
        raise ValueError("jump times must lie within [0, horizon]")
    starts = [0.0]
    values = [0.0]
    m = spec.drift
    acc = 0.0
    for t, z in zip(spec.times, spec.sizes):
        acc += z
        if t == 0.0:
            starts[0] = 0.0
            values[0] = acc
        else:
            starts.append(t)
            values.append(acc + m * t)
    slopes = [m] * len(starts)
    return PiecewisePath.from_arrays(starts, values, slopes, float(horizon))


def classify_jumps(increments, threshold: float) -> int:
    """Number of coordinates with absolute value above ``threshold``."""
    if not threshold > 0:
        raise ValueError(f"threshold must be > 0, got {threshold}")
    inc = np.asarray(increments, dtype=float)
    return int(np.count_nonzero(np.abs(inc) > threshold))


def sup_norm(path: PiecewisePath) -> float:
    """Supremum of ``|path(t)|`` over ``[0, horizon]``, exact from segment endpoints."""
    best = 0.0
    for t0, v0, slope, t1 in path.segments():
        end_val = v0 + slope * (t1 - t0)
        best = max(best, abs(v0), abs(end_val))
    return best


def bernstein_bound(n: int, sigma2: float, abs_bound: float, t: float) -> float:
    """Exponential tail bound ``2*exp(-t^2 / (2*n*sigma2 + (2/3)*abs_bound*t))``.

    Valid for sums of ``n`` iid zero-mean variables with variance ``sigma2``
    and absolute bound ``abs_bound``; always lies in (0, 2].
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if sigma2 < 0:
        raise ValueError("sigma2 must be >= 0")
    if not abs_bound > 0:
        raise ValueError("abs_bound must be > 0")
    if not t > 0:
        raise ValueError("t must be > 0")
    return 2.0 * math.exp(-(t * t) / (2.0 * n * sigma2 + (2.0 / 3.0) * abs_bound * t))


def serialize_path(path: PiecewisePath) -> str:
    """Line-oriented text form: one ``t,value_left,value_right,slope`` row per segment.

    A final sentinel row at the horizon carries the terminal value so the
    format round-trips without a separate header.
    """
    lines = []
    prev_end = 0.0
    for i, (t0, v0, slope, t1) in enumerate(path.segments()):
        lines.append(f"{t0!r},{prev_end!r},{v0!r},{slope!r}")
        prev_end = v0 + slope * (t1 - t0)
    if path.starts[-1] != path.horizon:
        lines.append(f"{path.horizon!r},{prev_end!r},{prev_end!r},0.0")
    return "\n".join(lines) + "\n"


def parse_path(text: str) -> PiecewisePath:
    """Inverse of :func:`serialize_path`."""
    rows = []
    for line in text.strip().splitlines():
        t, left, right, slope = (float(f) for f in line.split(","))
        rows.append((t, left, right, slope))
    if len(rows) < 2:
        raise ValueError("serialized path needs at least two rows")
    horizon = rows[-1][0]
    # A trailing row with no discontinuity and zero slope is the sentinel;
    # dropping it never changes the evaluated path.
    last_t, last_left, last_right, last_slope = rows[-1]
    if last_left == last_right and last_slope == 0.0:
        rows = rows[:-1]
    segments = [(t, right, slope) for t, _left, right, slope in rows]
    return PiecewisePath(segments, horizon)
