"""Independent oracles used by the test suite.

These deliberately avoid the code paths they check: the two-jump tail oracle
integrates by Monte Carlo over the capped first-jump size instead of
quadrature, and the period oracle scans a dense grid instead of solving
crossings in closed form.
"""

from __future__ import annotations

import math

import numpy as np

from lipq import ModelParams, kappa


def mc_mu2_tail(
    params: ModelParams, l: float, n_samples: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo two-jump tail: sample the first jump from its normalized
    power tail above the level and average the closed-form inner factor.
    """
    alpha = params.alpha
    s = params.drain_rate
    level = params.level
    buf = params.buffer
    cap = kappa(params)
    rng = np.random.default_rng(seed)
    v = 1.0 - rng.random(n_samples)  # (0, 1]
    j1 = level * v ** (-1.0 / alpha)
    top = np.minimum(j1, buf) - level
    ok = top / s > (l - cap)
    denom = np.where(ok, l * s - top, 1.0)
    g = np.where(ok, (top / s - (l - cap)) / denom ** alpha, 0.0)
    mass = level ** -alpha
    est = (params.horizon - l) * mass * float(g.mean())
    se = (params.horizon - l) * mass * float(g.std(ddof=1)) / math.sqrt(n_samples)
    return est, se


def grid_scan_periods(path, level: float, step: float):
    """Brute-force sojourn finder on a regular grid; resolution ``step``.

    Returns (periods, longest).  Periods shorter than the grid step are
    invisible to this oracle by construction.
    """
    horizon = path.horizon
    ts = np.arange(0.0, horizon, step)
    ts = np.append(ts, horizon)
    above = path.value_array(ts) > level
    periods = []
    start = None
    for t, flag in zip(ts, above):
        if flag and start is None:
            start = t
        elif not flag and start is not None:
            periods.append((start, t))
            start = None
    if start is not None:
        periods.append((start, horizon))
    longest = max((b - a for a, b in periods), default=0.0)
    return periods, longest


def iterate_lindley(arrivals, rate: float, buffer: float) -> np.ndarray:
    """Plain recursion oracle ``q <- min(max(q + a - c, 0), K)`` per slot."""
    q = 0.0
    out = np.empty(len(arrivals))
    for i, a in enumerate(arrivals):
        q = min(max(q + a - rate, 0.0), buffer)
        out[i] = q
    return out
