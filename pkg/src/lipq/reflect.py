"""Finite-buffer queue dynamics.

The buffered recursion ``Q_i = min(max(Q_{i-1} + A_i - c, 0), K)`` and its
continuous counterpart: the two-sided reflection of a net-input path on
``[0, K]`` with minimal regulators at both boundaries.  The reflection is
event-driven and exact; boundary-hitting times inside drift segments are
solved in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .heavytail import ArrivalDist, arrival_quantile
from .pathspace import PiecewisePath, embed_walk


@dataclass(frozen=True)
class QueueModel:
    """Buffered queue: capacity ``buffer``, fixed service rate ``rate``,
    iid work arrivals at integer epochs, observation window ``[0, horizon]``.

    Stability (``rate > arrivals.mean``) is required so that buffer proximity
    is a rare event rather than the norm.
    """

    buffer: float
    rate: float
    arrivals: ArrivalDist
    horizon: float

    def __post_init__(self) -> None:
        if not self.buffer > 0:
            raise ValueError(f"buffer must be > 0, got {self.buffer}")
        if not self.rate > self.arrivals.mean:
            raise ValueError(
                f"need rate > mean arrival ({self.rate} <= {self.arrivals.mean})"
            )
        if not self.horizon > 0:
            raise ValueError(f"horizon must be > 0, got {self.horizon}")

    @property
    def drain_rate(self) -> float:
        """Net drift ``rate - mean`` of the queue away from the buffer."""
        return self.rate - self.arrivals.mean


@dataclass(frozen=True)
class QueuePath:
    """Reflected path confined to ``[0, buffer]`` plus its two regulators.

    ``lower`` and ``upper`` are the cumulative regulator paths; their terminal
    values give the total idleness compensation and the total lost work.
    """

    path: PiecewisePath
    lower: PiecewisePath
    upper: PiecewisePath
    buffer: float

    @property
    def horizon(self) -> float:
        return self.path.horizon

    def value(self, t: float) -> float:
        return self.path.value(t)

    @property
    def lower_total(self) -> float:
        return self.lower.end_value

    @property
    def lost_work(self) -> float:
        return self.upper.end_value


def lindley_step(q_prev: float, arrival: float, rate: float, buffer: float) -> float:
    """One slot of the buffered recursion: ``min(max(q + a - c, 0), K)``."""
    if not 0.0 <= q_prev <= buffer:
        raise ValueError(f"q_prev={q_prev} outside [0, {buffer}]")
    return min(max(q_prev + arrival - rate, 0.0), buffer)


class _Regulator:
    """Cumulative nondecreasing piecewise-linear record: points + accrual spans."""

    __slots__ = ("ts", "vs", "ss", "total")

    def __init__(self) -> None:
        self.ts = [0.0]
        self.vs = [0.0]
        self.ss = [0.0]
        self.total = 0.0

    def add_point(self, t: float, amount: float) -> None:
        self.total += amount
        self._push(t, self.total, 0.0)

    def accrue(self, t_from: float, t_to: float, rate: float, horizon: float) -> None:
        self._push(t_from, self.total, rate)
        self.total += rate * (t_to - t_from)
        if t_to < horizon:
            self._push(t_to, self.total, 0.0)

    def _push(self, t: float, v: float, s: float) -> None:
        if t == self.ts[-1]:
            self.vs[-1] = v
            self.ss[-1] = s
        else:
            self.ts.append(t)
            self.vs.append(v)
            self.ss.append(s)

    def to_path(self, horizon: float) -> PiecewisePath:
        return PiecewisePath.from_arrays(self.ts, self.vs, self.ss, horizon)


def skorohod_reflect(input_path: PiecewisePath, buffer: float) -> QueuePath:
    """Two-sided reflection of ``input_path`` on ``[0, buffer]``.

    Returns the regulated path ``v`` together with the cumulative regulators
    ``l`` (growing only while v = 0) and ``u`` (growing only while v = buffer),
    satisfying ``v = x + l - u`` at every event time.
    """
    if not buffer > 0:
        raise ValueError(f"buffer must be > 0, got {buffer}")
    if input_path.value(0.0) != 0.0:
        raise ValueError("input path must start at 0")

    starts = input_path.starts
    values = input_path.values
    slopes = input_path.slopes
    horizon = input_path.horizon
    n = starts.size

    out_t: list[float] = []
    out_v: list[float] = []
    out_s: list[float] = []

    def push_out(t: float, v: float, s: float) -> None:
        if out_t and t == out_t[-1]:
            out_v[-1] = v
            out_s[-1] = s
        else:
            out_t.append(t)
            out_v.append(v)
            out_s.append(s)

    low = _Regulator()
    up = _Regulator()
    v = 0.0
    prev_end = 0.0
    for i in range(n):
        t0 = starts[i]
        s = slopes[i]
        t1 = starts[i + 1] if i + 1 < n else horizon

        jump = values[i] - prev_end
        if jump != 0.0:
            v += jump
            if v > buffer:
                up.add_point(t0, v - buffer)
                v = buffer
            elif v < 0.0:
                low.add_point(t0, -v)
                v = 0.0

        if s > 0.0:
            if v < buffer:
                hit = t0 + (buffer - v) / s
                if hit < t1:
                    push_out(t0, v, s)
                    push_out(hit, buffer, 0.0)
                    up.accrue(hit, t1, s, horizon)
                    v = buffer
                else:
                    push_out(t0, v, s)
                    v += s * (t1 - t0)
            else:
                push_out(t0, buffer, 0.0)
                up.accrue(t0, t1, s, horizon)
                v = buffer
        elif s < 0.0:
            if v > 0.0:
                hit = t0 + v / (-s)
                if hit < t1:
                    push_out(t0, v, s)
                    push_out(hit, 0.0, 0.0)
                    low.accrue(hit, t1, -s, horizon)
                    v = 0.0
                else:
                    push_out(t0, v, s)
                    v += s * (t1 - t0)
            else:
                push_out(t0, 0.0, 0.0)
                low.accrue(t0, t1, -s, horizon)
                v = 0.0
        else:
            push_out(t0, v, 0.0)

        prev_end = values[i] + s * (t1 - t0)

    out = PiecewisePath.from_arrays(out_t, out_v, out_s, horizon)
    return QueuePath(
        path=out,
        lower=low.to_path(horizon),
        upper=up.to_path(horizon),
        buffer=buffer,
    )


def queue_path_from_arrivals(
    arrivals,
    buffer: float,
    rate: float,
    horizon: float,
    interpolation: str = "drift",
) -> QueuePath:
    """Reflect the net-input path of a fixed arrival stream on ``[0, buffer]``.

    ``interpolation="drift"`` builds the continuous embedding (service drains
    at ``-rate`` between integer epochs, work jumps up at the epochs);
    ``"step"`` holds slot totals constant between epochs, which matches the
    discrete recursion exactly at integer times.
    """
    a = np.asarray(arrivals, dtype=float)
    n = a.size
    if n < 1:
        raise ValueError("need at least one arrival")
    if n > horizon:
        raise ValueError(f"{n} integer arrival epochs do not fit in [0, {horizon}]")
    if interpolation == "step":
        if n != horizon:
            raise ValueError("step interpolation requires horizon == n arrivals")
        return skorohod_reflect(embed_walk(a - rate, float(horizon)), buffer)
    if interpolation != "drift":
        raise ValueError(f"unknown interpolation {interpolation!r}")
    epochs = np.arange(1, n + 1, dtype=float)
    starts = np.concatenate(([0.0], epochs))
    values = np.concatenate(([0.0], np.cumsum(a) - rate * epochs))
    slopes = np.full(n + 1, -rate)
    path = PiecewisePath.from_arrays(starts, values, slopes, float(horizon))
    return skorohod_reflect(path, buffer)


def simulate_queue(
    model: QueueModel,
    n_arrivals: int,
    seed,
    interpolation: str = "drift",
) -> QueuePath:
    """Simulate one queue trajectory; deterministic in ``(model, n_arrivals, seed)``.

    Arrivals at integer epochs are drawn by inverse survival from a PCG64
    stream keyed by ``seed`` (an int or a ``numpy.random.SeedSequence``).
    """
    if n_arrivals < 1:
        raise ValueError("n_arrivals must be >= 1")
    rng = np.random.default_rng(_as_seed_sequence(seed))
    u_surv = 1.0 - rng.random(n_arrivals)
    arrivals = arrival_quantile(model.arrivals, u_surv)
    return queue_path_from_arrivals(
        arrivals, model.buffer, model.rate, model.horizon, interpolation
    )


def scaled_queue(model: QueueModel, n: int, seed, interpolation: str = "drift") -> QueuePath:
    """Rescaled big-buffer queue: buffer ``n*K`` and horizon ``n*M`` run once,
    then time and values divided by ``n`` back onto ``[0, horizon]``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    big = QueueModel(
        buffer=n * model.buffer,
        rate=model.rate,
        arrivals=model.arrivals,
        horizon=n * model.horizon,
    )
    qp = simulate_queue(big, int(n * model.horizon), seed, interpolation)
    return QueuePath(
        path=qp.path.rescale(n, n),
        lower=qp.lower.rescale(n, n),
        upper=qp.upper.rescale(n, n),
        buffer=model.buffer,
    )


def _as_seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)
