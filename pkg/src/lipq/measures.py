"""Closed-form limit measures and rates for long intense periods.

The one-jump level has an explicit tail with an atom at the maximal
single-jump period length; the two-jump level is a smooth one-dimensional
integral evaluated by adaptive quadrature.  Both are expressed at physical
scale: the family is homogeneous, so the scaled forms collapse to a single
tail constant multiplying these measures (see ``combined_tail_estimate``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from scipy.integrate import quad


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the intense-period study.

    ``theta`` is the threshold fraction of the buffer; the horizon must exceed
    twice the maximal one-jump period length so both analytic levels fit in
    the observation window.
    """

    alpha: float
    mean: float
    rate: float
    theta: float
    buffer: float
    horizon: float

    def __post_init__(self) -> None:
        if not self.alpha > 1:
            raise ValueError(f"alpha must be > 1, got {self.alpha}")
        if not self.rate > self.mean:
            raise ValueError(f"need rate > mean ({self.rate} <= {self.mean})")
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"theta must be in (0, 1), got {self.theta}")
        if not self.buffer > 0:
            raise ValueError(f"buffer must be > 0, got {self.buffer}")
        cap = kappa(self)
        if not self.horizon > 2 * cap:
            raise ValueError(
                f"horizon must exceed twice the one-jump cap ({2 * cap}), got {self.horizon}"
            )

    @property
    def drain_rate(self) -> float:
        return self.rate - self.mean

    @property
    def level(self) -> float:
        """Intense threshold ``theta * buffer``."""
        return self.theta * self.buffer


@dataclass(frozen=True)
class MeasureRepr:
    """A limit measure as atoms + tail function + support interval."""

    atoms: tuple[tuple[float, float], ...]
    tail: Callable[[float], float]
    support: tuple[float, float]


def kappa(params: ModelParams) -> float:
    """Maximal intense-period length from a single jump: ``(1-theta)*K/(c-m)``.

    A buffer-filling jump starts a period that the net drain ends after at
    most this long, so the one-jump level concentrates on ``(0, kappa]``.
    """
    return (1.0 - params.theta) * params.buffer / params.drain_rate


def mu1_tail(params: ModelParams, l: float) -> float:
    """One-jump tail mass of ``{longest period > l}``: the closed form
    ``(M - l) * (l*(c-m) + theta*K)**-alpha`` on ``(0, kappa]``, 0 beyond.

    The value at ``l = kappa`` equals the atom mass.
    """
    if not l > 0:
        raise ValueError(f"l must be > 0, got {l}")
    if l > kappa(params):
        return 0.0
    return (params.horizon - l) * (
        l * params.drain_rate + params.level
    ) ** -params.alpha


def mu1_atom(params: ModelParams) -> tuple[float, float]:
    """Atom of the one-jump measure: ``(kappa, (M - kappa) * K**-alpha)``.

    Buffer-filling jumps all produce exactly the maximal period length, which
    is where the point mass sits.
    """
    cap = kappa(params)
    mass = (params.horizon - cap) * params.buffer ** -params.alpha
    return cap, mass


def mu2_tail(params: ModelParams, l: float, rel_tol: float = 1e-8) -> float:
    """Two-jump tail mass of ``{longest period > l}`` for ``l`` in ``(kappa, 2*kappa]``.

    Integrates over the first-jump size x (capped at the buffer) the length of
    admissible second-jump times weighted by the second-jump tail:

        (M-l)/(c-m) * [ int_A^K alpha x^(-alpha-1) (x - A)
                          / (l(c-m) + theta K - x)^alpha dx
                        + K^-alpha (2(1-theta)K - l(c-m))
                          / (l(c-m) - (1-theta)K)^alpha ]

    with ``A = theta K + l(c-m) - (1-theta)K``.  The mass diverges as l
    decreases to kappa (the measure is only finite away from the one-jump
    support), so ``l <= kappa`` is a domain error; beyond ``2*kappa`` the
    measure vanishes and 0 is returned.
    """
    cap = kappa(params)
    if l <= cap:
        raise ValueError(f"l must exceed the one-jump cap {cap}, got {l}")
    if l > 2 * cap:
        return 0.0
    alpha = params.alpha
    s = params.drain_rate
    level = params.level
    buf = params.buffer
    spare = (1.0 - params.theta) * buf
    lo = level + l * s - spare
    hi = buf

    def integrand(x: float) -> float:
        return alpha * x ** (-alpha - 1.0) * (x - lo) / (l * s + level - x) ** alpha

    if lo >= hi:
        integral = 0.0
    else:
        integral, _err = quad(integrand, lo, hi, epsabs=1e-300, epsrel=rel_tol, limit=200)
    capped = buf ** -alpha * (2.0 * spare - l * s) / (l * s - spare) ** alpha
    return (params.horizon - l) / s * (integral + capped)


def gamma_rate(n: int, tail_prob: float, j: int) -> float:
    """Level-``j`` rate ``(n * tail_prob)**-j`` for the walk-deviation scalings."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < tail_prob < 1.0:
        raise ValueError(f"tail_prob must be in (0, 1), got {tail_prob}")
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    return float(n * tail_prob) ** -j


def combined_tail_estimate(
    params: ModelParams, tail_const: float, l: float, rel_tol: float = 1e-8
) -> float:
    """Piecewise probability estimate of ``P(longest period > l)``.

    ``C * mu1_tail`` on the one-jump support, ``C**2 * mu2_tail`` on the
    two-jump support, 0 beyond.  ``tail_const`` is the ``n**alpha * P(A > n)``
    constant; powers of it absorb all the scale dependence because both
    measures are homogeneous in ``(buffer, horizon, l)``.
    """
    if not l > 0:
        raise ValueError(f"l must be > 0, got {l}")
    cap = kappa(params)
    if l <= cap:
        return tail_const * mu1_tail(params, l)
    if l <= 2 * cap:
        return tail_const ** 2 * mu2_tail(params, l, rel_tol)
    return 0.0


def atom_estimate(
    params: ModelParams,
    tail_const: float,
    eps_lo: float | None = None,
    eps_hi: float | None = None,
) -> float:
    """Probability attributed to the atom window ``(kappa-eps_lo, kappa+eps_hi)``.

    The value is the atom mass times the tail constant and does not depend on
    the window; the window only states where a display should spread it.
    """
    cap, mass = mu1_atom(params)
    if eps_lo is None:
        eps_lo = 0.05 * cap
    if eps_hi is None:
        eps_hi = 0.05 * cap
    if not (eps_lo > 0 and eps_hi > 0):
        raise ValueError("window widths must be > 0")
    return tail_const * mass


def one_jump_measure(params: ModelParams) -> MeasureRepr:
    """One-jump limit measure: density on ``(0, kappa)`` plus the atom at ``kappa``."""
    return MeasureRepr(
        atoms=(mu1_atom(params),),
        tail=lambda l: mu1_tail(params, l),
        support=(0.0, kappa(params)),
    )


def two_jump_measure(params: ModelParams, rel_tol: float = 1e-8) -> MeasureRepr:
    """Two-jump limit measure on ``(kappa, 2*kappa]``; no atom, infinite near kappa."""
    cap = kappa(params)
    return MeasureRepr(
        atoms=(),
        tail=lambda l: mu2_tail(params, l, rel_tol),
        support=(cap, 2 * cap),
    )


def tabulate_measures(
    params: ModelParams,
    tail_const: float,
    grid,
    rel_tol: float = 1e-8,
) -> list[dict[str, float]]:
    """Rows ``(l, mu1_tail, mu2_tail, combined_estimate)`` on a level grid.

    The two-jump column is blank (NaN) where the measure is undefined
    (``l <= kappa``) and 0 beyond its support.
    """
    cap = kappa(params)
    rows = []
    for l in grid:
        l = float(l)
        mu1 = mu1_tail(params, l) if l > 0 else float("nan")
        mu2 = mu2_tail(params, l, rel_tol) if l > cap else float("nan")
        comb = combined_tail_estimate(params, tail_const, l, rel_tol) if l > 0 else float("nan")
        rows.append({"level": l, "mu1_tail": mu1, "mu2_tail": mu2, "combined": comb})
    return rows
