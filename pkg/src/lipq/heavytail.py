"""Heavy-tailed distribution primitives.

Power-law tail masses with a positive/negative weight split, and the
shifted-Pareto arrival law used throughout the queueing experiments:
``P(A > z) = (z / ((alpha - 1) * mean) + 1) ** -alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TailParams:
    """Two-sided power tail: index ``alpha`` and positive-tail weight ``p``."""

    alpha: float
    p: float = 1.0

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0, 1], got {self.p}")

    @property
    def q(self) -> float:
        """Negative-tail weight."""
        return 1.0 - self.p


@dataclass(frozen=True)
class ArrivalDist:
    """Shifted-Pareto work arrivals with tail index ``alpha`` and mean ``mean``.

    Requires ``alpha > 1`` so the mean is finite; the survival function is
    ``(z / scale + 1) ** -alpha`` with ``scale = (alpha - 1) * mean``.
    """

    alpha: float
    mean: float

    def __post_init__(self) -> None:
        if not self.alpha > 1:
            raise ValueError(f"alpha must be > 1 for a finite mean, got {self.alpha}")
        if not self.mean > 0:
            raise ValueError(f"mean must be > 0, got {self.mean}")

    @property
    def scale(self) -> float:
        return (self.alpha - 1.0) * self.mean


def nu_alpha_tail(
    params: TailParams,
    y: float | None = None,
    x: float | None = None,
) -> float:
    """Mass of ``(-inf, -y) | (x, inf)`` under the limiting power-tail measure.

    Either side may be omitted; the result is ``q * y**-alpha + p * x**-alpha``
    over the sides present.
    """
    if x is None and y is None:
        raise ValueError("at least one of x, y must be given")
    total = 0.0
    if y is not None:
        if not y > 0:
            raise ValueError(f"y must be > 0, got {y}")
        total += params.q * y ** -params.alpha
    if x is not None:
        if not x > 0:
            raise ValueError(f"x must be > 0, got {x}")
        total += params.p * x ** -params.alpha
    return total


def survival(dist: ArrivalDist, z: float) -> float:
    """P(arrival > z); accepts scalars or arrays, equals 1 at z = 0."""
    if np.any(np.asarray(z) < 0):
        raise ValueError("work level must be >= 0")
    return (z / dist.scale + 1.0) ** -dist.alpha


def sample_arrival(dist: ArrivalDist, u: float) -> float:
    """Inverse-survival sampler: returns the z with ``survival(z) == u``.

    ``u`` is a uniform(0, 1) variate interpreted as a tail probability, so
    small ``u`` maps to large arrivals.
    """
    a = np.asarray(u)
    if np.any(a <= 0.0) or np.any(a >= 1.0):
        raise ValueError("u must lie in the open interval (0, 1)")
    return dist.scale * (u ** (-1.0 / dist.alpha) - 1.0)


def arrival_quantile(dist: ArrivalDist, u_surv):
    """Vectorised sampler body; ``u_surv`` in (0, 1], no open-interval check.

    Simulation engines draw ``u_surv = 1 - U`` with ``U`` uniform on [0, 1)
    and map it through this closed form, which is exactly ``sample_arrival``
    extended to the closed right endpoint (u = 1 gives zero work).
    """
    return dist.scale * (u_surv ** (-1.0 / dist.alpha) - 1.0)


def tail_constant(dist: ArrivalDist, n_ref: float | None = None) -> float:
    """Scaling constant ``n**alpha * P(A > n)`` at a reference scale.

    With ``n_ref=None`` (the default) returns the large-scale limit
    ``scale**alpha``; for this arrival family the finite-scale constant
    increases monotonically to that limit.
    """
    if n_ref is None:
        return dist.scale ** dist.alpha
    if not n_ref > 0:
        raise ValueError(f"n_ref must be > 0, got {n_ref}")
    return n_ref ** dist.alpha * survival(dist, n_ref)
