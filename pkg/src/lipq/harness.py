"""Monte Carlo experiment driver and empirical-vs-analytic comparisons.

Replications are keyed by ``SeedSequence(entropy=master_seed, spawn_key=(rep,))``
so every replication owns an independent, order-free random stream: results
are bit-identical however the work is batched or scheduled.  The replication
engine advances all queues of a batch one arrival epoch at a time with the
same closed-form slot algebra as the event-driven path machinery, which keeps
it exactly consistent with ``simulate_queue`` + ``longest_intense`` while
staying fast enough for 1e5-replication studies.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .heavytail import ArrivalDist, arrival_quantile, survival
from .intense import longest_intense
from .measures import ModelParams, gamma_rate, kappa, mu1_atom, mu1_tail, mu2_tail
from .pathspace import JumpSpec, h_j_path
from .reflect import skorohod_reflect

_ENGINE_BATCH = 2048
_WALK_BLOCK = 1000


def replication_seed(master_seed: int, rep: int) -> np.random.SeedSequence:
    """Independent per-replication seed: ``SeedSequence(master, spawn_key=(rep,))``."""
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(rep,))


def replicate_arrivals(dist: ArrivalDist, n_arrivals: int, master_seed: int, rep: int) -> np.ndarray:
    """Regenerate the exact arrival stream of one replication (for audits)."""
    rng = np.random.default_rng(replication_seed(master_seed, rep))
    return arrival_quantile(dist, 1.0 - rng.random(n_arrivals))


@dataclass(frozen=True)
class ExperimentConfig:
    """One intense-period study: model, replication count, seed, bin width.

    Arrivals land at integer epochs, so ``n_arrivals`` must equal the horizon.
    """

    params: ModelParams
    n_arrivals: int
    n_reps: int
    master_seed: int
    bin_width: float | None = None
    out_dir: str | None = None
    out_format: str = "csv"

    def __post_init__(self) -> None:
        if self.n_reps < 1:
            raise ValueError("n_reps must be >= 1")
        if self.n_arrivals != self.params.horizon:
            raise ValueError(
                f"n_arrivals ({self.n_arrivals}) must equal the horizon "
                f"({self.params.horizon}) so integer epochs fill the window"
            )
        if self.bin_width is not None and not self.bin_width > 0:
            raise ValueError("bin_width must be > 0")
        if self.out_format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.out_format!r}")

    @property
    def effective_bin_width(self) -> float:
        return self.bin_width if self.bin_width is not None else 0.05 * kappa(self.params)


@dataclass(frozen=True)
class LipDataset:
    """Per-replication outcomes of an intense-period experiment.

    ``input_end`` is the terminal value of the unreflected net-input walk;
    together with ``final_value`` and the regulator totals it witnesses the
    conservation identity of the reflection per replication.
    """

    config: ExperimentConfig
    longest: np.ndarray
    n_periods: np.ndarray
    lost_work: np.ndarray
    idle_makeup: np.ndarray
    max_value: np.ndarray
    min_value: np.ndarray
    final_value: np.ndarray
    input_end: np.ndarray

    @property
    def n_reps(self) -> int:
        return self.longest.size

    @property
    def positive_lengths(self) -> np.ndarray:
        return self.longest[self.longest > 0.0]

    def prob_positive(self) -> tuple[float, float]:
        """Empirical P(longest period > 0) with its binomial standard error."""
        n = self.n_reps
        p = float(np.count_nonzero(self.longest > 0.0)) / n
        return p, math.sqrt(p * (1.0 - p) / n)

    def tail_prob(self, l: float) -> tuple[float, float]:
        """Empirical P(longest period > l) with its binomial standard error."""
        n = self.n_reps
        p = float(np.count_nonzero(self.longest > l)) / n
        return p, math.sqrt(p * (1.0 - p) / n)

    def runs_rows(self) -> list[dict]:
        return [
            {
                "rep": int(r),
                "longest": float(self.longest[r]),
                "n_periods": int(self.n_periods[r]),
                "lost_work": float(self.lost_work[r]),
                "max_value": float(self.max_value[r]),
            }
            for r in range(self.n_reps)
        ]


def _simulate_batch(
    params: ModelParams, n_arrivals: int, master_seed: int, lo: int, hi: int
) -> dict[str, np.ndarray]:
    """Run replications ``lo..hi-1`` one epoch at a time, all queues in lockstep.

    Slot algebra (drain at the service rate, clamp at 0, jump, clamp at the
    buffer, closed-form level crossings) mirrors the event-driven reflection
    exactly, so per-replication outputs agree with the path pipeline to
    floating-point accumulation error.
    """
    dist = ArrivalDist(params.alpha, params.mean)
    n = n_arrivals
    m = hi - lo
    rate = params.rate
    buf = params.buffer
    level = params.level
    horizon = params.horizon

    rows = np.empty((m, n))
    for r in range(lo, hi):
        rng = np.random.default_rng(replication_seed(master_seed, r))
        rows[r - lo] = arrival_quantile(dist, 1.0 - rng.random(n))
    slots = np.ascontiguousarray(rows.T)
    del rows

    q = np.zeros(m)
    in_per = np.zeros(m, dtype=bool)
    start = np.zeros(m)
    longest = np.zeros(m)
    n_periods = np.zeros(m, dtype=np.int64)
    idle = np.zeros(m)
    lost = np.zeros(m)
    max_value = np.zeros(m)
    min_value = np.zeros(m)
    input_end = slots.sum(axis=0) - rate * n
    pre = np.empty(m)
    scratch = np.empty(m)

    for i in range(1, n + 1):
        # periods that end while the queue drains through the level in this slot
        idx = np.nonzero(in_per & (q - rate < level))[0]
        if idx.size:
            lengths = (i - 1.0) + (q[idx] - level) / rate - start[idx]
            longest[idx] = np.maximum(longest[idx], lengths)
            n_periods[idx] += 1
            in_per[idx] = False
        # drain to the epoch (clamp at empty), then the arrival (clamp at full)
        np.subtract(q, rate, out=pre)
        np.minimum(pre, 0.0, out=scratch)
        idle -= scratch
        np.maximum(pre, 0.0, out=pre)
        pre += slots[i - 1]
        np.subtract(pre, buf, out=scratch)
        np.maximum(scratch, 0.0, out=scratch)
        lost += scratch
        np.minimum(pre, buf, out=q)
        np.maximum(max_value, q, out=max_value)
        np.minimum(min_value, q, out=min_value)
        oidx = np.nonzero(~in_per & (q > level))[0]
        if oidx.size:
            start[oidx] = float(i)
            in_per[oidx] = True

    idx = np.nonzero(in_per)[0]
    if idx.size:
        lengths = horizon - start[idx]
        longest[idx] = np.maximum(longest[idx], lengths)
        n_periods[idx] += 1

    return {
        "longest": longest,
        "n_periods": n_periods,
        "lost_work": lost,
        "idle_makeup": idle,
        "max_value": max_value,
        "min_value": min_value,
        "final_value": q.copy(),
        "input_end": input_end,
    }


def run_lip_experiment(config: ExperimentConfig, workers: int = 1) -> LipDataset:
    """Run the full replication study; deterministic in the master seed.

    ``workers > 1`` schedules fixed-size replication batches concurrently;
    batching and scheduling cannot change any output bit because every
    replication draws from its own spawn-keyed stream and results land in
    preallocated slots.
    """
    n_reps = config.n_reps
    out = {
        "longest": np.empty(n_reps),
        "n_periods": np.empty(n_reps, dtype=np.int64),
        "lost_work": np.empty(n_reps),
        "idle_makeup": np.empty(n_reps),
        "max_value": np.empty(n_reps),
        "min_value": np.empty(n_reps),
        "final_value": np.empty(n_reps),
        "input_end": np.empty(n_reps),
    }
    spans = [
        (lo, min(lo + _ENGINE_BATCH, n_reps)) for lo in range(0, n_reps, _ENGINE_BATCH)
    ]

    def run_span(span: tuple[int, int]) -> None:
        lo, hi = span
        batch = _simulate_batch(config.params, config.n_arrivals, config.master_seed, lo, hi)
        for key, arr in batch.items():
            out[key][lo:hi] = arr

    if workers <= 1:
        for span in spans:
            run_span(span)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_span, spans))

    return LipDataset(config=config, **out)


# ---------------------------------------------------------------------------
# histogram comparison


def kappa_centered_edges(
    params: ModelParams, bin_width: float, hi_mult: float = 2.1
) -> np.ndarray:
    """Bin edges of width ``bin_width`` positioned so the one-jump cap is a bin
    center, extended down to 0 (possibly via a short first bin) and up past
    ``hi_mult`` times the cap.
    """
    if not bin_width > 0:
        raise ValueError("bin_width must be > 0")
    cap = kappa(params)
    lefts = []
    e = cap - bin_width / 2.0
    while e > 0.0:
        lefts.append(e)
        e -= bin_width
    lefts.append(0.0)
    lefts.reverse()
    rights = []
    e = cap + bin_width / 2.0
    target = hi_mult * cap
    while e < target:
        rights.append(e)
        e += bin_width
    rights.append(e)
    return np.asarray(lefts + rights)


@dataclass(frozen=True)
class HistComparison:
    """Per-bin empirical vs analytic conditional densities (``L | L > 0``)."""

    insufficient: bool
    n_positive: int
    normalizer: float
    atom_window: tuple[float, float]
    rows: list[dict] = field(default_factory=list)
    reason: str = ""


def _mu1_ac_tail(params: ModelParams, l: float, atom_mass: float) -> float:
    """Tail of the absolutely continuous one-jump part (atom removed)."""
    cap = kappa(params)
    if l >= cap:
        return 0.0
    if l <= 0.0:
        return params.horizon * params.level ** -params.alpha - atom_mass
    return mu1_tail(params, l) - atom_mass


def compare_histogram(
    dataset: LipDataset,
    params: ModelParams,
    tail_const: float,
    bin_width: float | None = None,
    atom_window: tuple[float, float] | None = None,
    rel_tol: float = 1e-8,
) -> HistComparison:
    """Bin the positive lengths and set analytic conditional densities beside them.

    The one-jump column spreads the atom uniformly over the declared window
    around the cap; the two-jump column is blank (NaN) for the bin containing
    the cap, where that measure diverges, and zero below it.  All densities
    are conditional on a positive length: the empirical column divides by the
    positive count, the analytic columns by the analytic positive-probability
    mass ``tail_const * M * level**-alpha``.
    """
    w = bin_width if bin_width is not None else dataset.config.effective_bin_width
    cap = kappa(params)
    if atom_window is None:
        atom_window = (0.05 * cap, 0.05 * cap)
    eps_lo, eps_hi = atom_window
    if not (eps_lo > 0 and eps_hi > 0):
        raise ValueError("atom window widths must be > 0")

    pos = dataset.positive_lengths
    if pos.size == 0:
        return HistComparison(
            insufficient=True,
            n_positive=0,
            normalizer=float("nan"),
            atom_window=atom_window,
            reason="no replication produced a positive intense period",
        )

    edges = kappa_centered_edges(params, w)
    counts, _ = np.histogram(pos, bins=edges)
    n_pos = int(pos.size)

    _cap_loc, atom_mass = mu1_atom(params)
    norm = params.horizon * params.level ** -params.alpha  # analytic mass of {L > 0}
    win_lo, win_hi = cap - eps_lo, cap + eps_hi
    win_width = eps_lo + eps_hi

    rows: list[dict] = []
    for b in range(edges.size - 1):
        lo, hi = float(edges[b]), float(edges[b + 1])
        width = hi - lo
        center = 0.5 * (lo + hi)
        emp = counts[b] / (n_pos * width)

        ac_mass = _mu1_ac_tail(params, lo, atom_mass) - _mu1_ac_tail(params, hi, atom_mass)
        overlap = max(0.0, min(hi, win_hi) - max(lo, win_lo))
        ldp_mass = ac_mass + atom_mass * overlap / win_width
        ldp = ldp_mass / (norm * width)

        if hi <= cap:
            hld = 0.0
        elif lo < cap:
            hld = float("nan")  # two-jump mass diverges at the cap
        else:
            hld_mass = (mu2_tail(params, lo, rel_tol) if lo < 2 * cap else 0.0) - (
                mu2_tail(params, hi, rel_tol) if hi < 2 * cap else 0.0
            )
            hld = tail_const * hld_mass / (norm * width)

        rows.append(
            {
                "bin_lo": lo,
                "bin_hi": hi,
                "bin_center": center,
                "count": int(counts[b]),
                "empirical_density": float(emp),
                "ldp_density": float(ldp),
                "hld_density": float(hld),
                "ratio_ldp": float(emp / ldp) if ldp > 0 else float("nan"),
                "ratio_hld": float(emp / hld) if hld and hld > 0 else float("nan"),
            }
        )

    return HistComparison(
        insufficient=False,
        n_positive=n_pos,
        normalizer=tail_const * norm,
        atom_window=atom_window,
        rows=rows,
    )


# ---------------------------------------------------------------------------
# one-jump rate verification


@dataclass(frozen=True)
class RateCheck:
    """Scaled empirical sup-crossing probability against its analytic limit."""

    threshold: float
    hits: int
    n_walks: int
    emp_prob: float
    scaled_estimate: float
    scaled_se: float
    analytic: float
    z: float
    low_power: bool


def verify_rate_j1(
    dist: ArrivalDist,
    n_steps: int,
    lam: float,
    thresholds,
    n_walks: int,
    seed: int,
) -> list[RateCheck]:
    """First-level rate check for centered heavy-tailed walks.

    Walks take iid increments ``A - mean`` with ``A`` from ``dist``; for each
    threshold ``x`` the event is ``max_k S_k > x * lam``.  The empirical
    probability scaled by ``1 / (n * P(|increment| > lam))`` is compared to
    the one-jump limit value ``x**-alpha``; z-scores use the binomial
    standard error.  Blocks of fixed size own spawn-keyed streams, so the
    result is reproducible and extendable in ``n_walks``.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if n_walks < 1:
        raise ValueError("n_walks must be >= 1")
    if not lam > dist.mean:
        raise ValueError("lam must exceed the increment centering")
    xs = [float(x) for x in thresholds]
    if not xs or any(x <= 0 for x in xs):
        raise ValueError("thresholds must be positive")

    # |A - mean| > lam iff A > lam + mean (negative side is bounded by the mean)
    p_big = float(survival(dist, lam + dist.mean))
    rate = gamma_rate(n_steps, p_big, 1)

    counts = np.zeros(len(xs), dtype=np.int64)
    done = 0
    block_idx = 0
    while done < n_walks:
        size = min(_WALK_BLOCK, n_walks - done)
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(block_idx,))
        )
        u = rng.random((size, n_steps))
        inc = arrival_quantile(dist, 1.0 - u)
        inc -= dist.mean
        run_max = inc.cumsum(axis=1).max(axis=1)
        for k, x in enumerate(xs):
            counts[k] += int(np.count_nonzero(run_max > x * lam))
        done += size
        block_idx += 1

    out = []
    for k, x in enumerate(xs):
        hits = int(counts[k])
        p = hits / n_walks
        se = math.sqrt(p * (1.0 - p) / n_walks)
        scaled = rate * p
        scaled_se = rate * se
        analytic = x ** -dist.alpha
        z = (scaled - analytic) / scaled_se if hits > 0 else float("nan")
        out.append(
            RateCheck(
                threshold=x,
                hits=hits,
                n_walks=n_walks,
                emp_prob=p,
                scaled_estimate=scaled,
                scaled_se=scaled_se,
                analytic=analytic,
                z=z,
                low_power=hits < 10,
            )
        )
    return out


# ---------------------------------------------------------------------------
# planted two-jump conditional sampler


@dataclass(frozen=True)
class PlantedTwoJumpSample:
    """Importance sample of two-jump queue paths and their period lengths.

    The sampler draws exactly the normalized restriction of the two-jump
    limit measure to ``{first jump > level, second jump > floor}`` with
    ordered uniform jump times, so every sample carries the same weight: the
    total mass of that region.  Estimates of ``{L > l}`` are unbiased for
    ``l >= lower_valid``; below that, paths needing a second jump smaller
    than the floor are missed.
    """

    params: ModelParams
    n_samples: int
    seed: int
    second_jump_floor: float
    weight: float
    longest: np.ndarray

    @property
    def lower_valid(self) -> float:
        return kappa(self.params) + self.second_jump_floor / self.params.drain_rate

    def tail_estimate(self, l: float) -> tuple[float, float]:
        """Two-jump measure of ``{L > l}`` with Monte Carlo standard error."""
        p = float(np.count_nonzero(self.longest > l)) / self.n_samples
        se = math.sqrt(p * (1.0 - p) / self.n_samples)
        return self.weight * p, self.weight * se

    def bin_masses(self, edges) -> tuple[np.ndarray, np.ndarray]:
        """Two-jump measure of each bin with Monte Carlo standard errors."""
        counts, _ = np.histogram(self.longest, bins=np.asarray(edges, dtype=float))
        p = counts / self.n_samples
        se = np.sqrt(p * (1.0 - p) / self.n_samples)
        return self.weight * p, self.weight * se


def planted_two_jump_sampler(
    params: ModelParams,
    n_samples: int,
    seed: int,
    second_jump_floor: float | None = None,
) -> PlantedTwoJumpSample:
    """Sample two-jump paths through the real reflection pipeline.

    Jump times are ordered uniforms on the window, the first jump is drawn
    above the intense level and the second above ``second_jump_floor`` (both
    power-tailed with the model index), the drifting two-jump path is
    reflected on the buffer, and the longest intense period is recorded.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    cap = kappa(params)
    if second_jump_floor is None:
        second_jump_floor = 0.02 * (1.0 - params.theta) * params.buffer
    if not 0.0 < second_jump_floor < params.level:
        raise ValueError("second_jump_floor must be in (0, level)")

    horizon = params.horizon
    level = params.level
    buf = params.buffer
    drift = params.mean - params.rate
    alpha = params.alpha

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    times = rng.random((n_samples, 2)) * horizon
    times.sort(axis=1)
    j1 = level * (1.0 - rng.random(n_samples)) ** (-1.0 / alpha)
    j2 = second_jump_floor * (1.0 - rng.random(n_samples)) ** (-1.0 / alpha)

    longest = np.empty(n_samples)
    for i in range(n_samples):
        u1, u2 = times[i, 0], times[i, 1]
        if u1 <= 0.0 or u1 == u2:
            # zero-probability draws; skip rather than perturb
            longest[i] = -1.0
            continue
        spec = JumpSpec(times=(u1, u2), sizes=(float(j1[i]), float(j2[i])), drift=drift)
        queue = skorohod_reflect(h_j_path(spec, horizon), buf)
        longest[i] = longest_intense(queue, level)

    weight = level ** -alpha * second_jump_floor ** -alpha * horizon ** 2 / 2.0
    return PlantedTwoJumpSample(
        params=params,
        n_samples=n_samples,
        seed=seed,
        second_jump_floor=second_jump_floor,
        weight=weight,
        longest=longest,
    )


# ---------------------------------------------------------------------------
# output files


def write_table(path: Path | str, rows: list[dict], comments: list[str], fmt: str = "csv") -> None:
    """Write rows as commented CSV or as a JSON object with a meta block."""
    path = Path(path)
    if fmt == "csv":
        with path.open("w", newline="") as fh:
            for line in comments:
                fh.write(f"# {line}\n")
            if rows:
                writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
                writer.writeheader()
                writer.writerows(rows)
    elif fmt == "json":
        with path.open("w") as fh:
            json.dump({"meta": comments, "rows": rows}, fh, indent=1)
            fh.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def write_summary_json(path: Path | str, summary: dict) -> None:
    with Path(path).open("w") as fh:
        json.dump(summary, fh, indent=1, sort_keys=True)
        fh.write("\n")


def hist_comments(comp: HistComparison, params: ModelParams, tail_const: float) -> list[str]:
    """Header lines documenting the hist.csv normalization contract."""
    cap = kappa(params)
    return [
        "columns: bin_lo,bin_hi,bin_center,count,empirical_density,ldp_density,hld_density,ratio_ldp,ratio_hld",
        "densities are conditional on a positive longest period, per unit time",
        f"empirical_density = count / (n_positive * bin_width), n_positive = {comp.n_positive}",
        f"analytic columns divide by the analytic positive mass {comp.normalizer!r} (tail constant {tail_const!r})",
        f"one_jump_cap = {cap!r}; atom spread over ({cap - comp.atom_window[0]!r}, {cap + comp.atom_window[1]!r})",
        "hld_density is NaN on the bin containing the cap (two-jump measure diverges there) and 0 below it",
    ]
