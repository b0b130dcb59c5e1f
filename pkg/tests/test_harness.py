import math

import numpy as np
import pytest
from scipy.optimize import brentq

from lipq import (
    ArrivalDist,
    ExperimentConfig,
    JumpSpec,
    LipDataset,
    ModelParams,
    QueueModel,
    compare_histogram,
    enumerate_periods,
    h_j_path,
    kappa,
    kappa_centered_edges,
    longest_intense,
    mu1_tail,
    mu2_tail,
    planted_two_jump_sampler,
    replicate_arrivals,
    replication_seed,
    run_lip_experiment,
    simulate_queue,
    skorohod_reflect,
    tail_constant,
    verify_rate_j1,
)


def small_config(n_reps=400, seed=11, buffer=100.0, horizon=500.0) -> ExperimentConfig:
    params = ModelParams(1.44, 0.5, 1.0, 0.85, buffer, horizon)
    return ExperimentConfig(
        params=params, n_arrivals=int(horizon), n_reps=n_reps, master_seed=seed
    )


# --- replication engine -----------------------------------------------------


def test_experiment_deterministic():
    cfg = small_config()
    a = run_lip_experiment(cfg)
    b = run_lip_experiment(cfg)
    for field in ("longest", "n_periods", "lost_work", "idle_makeup", "max_value"):
        assert np.array_equal(getattr(a, field), getattr(b, field))


def test_serial_equals_concurrent():
    cfg = small_config(n_reps=3000)
    a = run_lip_experiment(cfg, workers=1)
    b = run_lip_experiment(cfg, workers=3)
    for field in ("longest", "n_periods", "lost_work", "idle_makeup", "max_value"):
        assert np.array_equal(getattr(a, field), getattr(b, field))


def test_engine_matches_path_pipeline(desk_dist):
    cfg = small_config(n_reps=25, seed=3)
    ds = run_lip_experiment(cfg)
    model = QueueModel(buffer=100.0, rate=1.0, arrivals=desk_dist, horizon=500.0)
    for rep in range(cfg.n_reps):
        qp = simulate_queue(model, 500, replication_seed(3, rep))
        periods = enumerate_periods(qp, 85.0)
        assert abs(periods.longest - ds.longest[rep]) <= 1e-9
        assert periods.count == ds.n_periods[rep]
        assert abs(qp.lost_work - ds.lost_work[rep]) <= 1e-9
        assert abs(qp.lower_total - ds.idle_makeup[rep]) <= 1e-9


def test_negligible_arrivals_never_intense():
    params = ModelParams(1.44, 1e-6, 1.0, 0.85, 100.0, 400.0)
    cfg = ExperimentConfig(params=params, n_arrivals=400, n_reps=300, master_seed=0)
    ds = run_lip_experiment(cfg)
    assert np.all(ds.longest == 0.0)
    p, se = ds.prob_positive()
    assert p == 0.0 and se == 0.0
    comp = compare_histogram(ds, params, 1.0)
    assert comp.insufficient
    assert "positive" in comp.reason


def test_replicated_arrivals_match_stream(desk_dist):
    a = replicate_arrivals(desk_dist, 50, 12, 7)
    b = replicate_arrivals(desk_dist, 50, 12, 7)
    c = replicate_arrivals(desk_dist, 50, 12, 8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_binomial_standard_errors():
    cfg = small_config(n_reps=500, seed=21)
    ds = run_lip_experiment(cfg)
    p, se = ds.prob_positive()
    assert se == pytest.approx(math.sqrt(p * (1 - p) / 500))
    p2, se2 = ds.tail_prob(10.0)
    assert se2 == pytest.approx(math.sqrt(p2 * (1 - p2) / 500))
    assert 0.0 <= p2 <= p <= 1.0


def test_config_validation(desk_params):
    with pytest.raises(ValueError):
        ExperimentConfig(params=desk_params, n_arrivals=4999, n_reps=10, master_seed=0)
    with pytest.raises(ValueError):
        ExperimentConfig(params=desk_params, n_arrivals=5000, n_reps=0, master_seed=0)
    with pytest.raises(ValueError):
        ExperimentConfig(
            params=desk_params, n_arrivals=5000, n_reps=10, master_seed=0, bin_width=0.0
        )
    with pytest.raises(ValueError):
        ExperimentConfig(
            params=desk_params, n_arrivals=5000, n_reps=10, master_seed=0, out_format="xml"
        )


# --- histogram comparison ---------------------------------------------------


def test_kappa_centered_edges_properties(desk_params):
    cap = kappa(desk_params)
    w = 0.05 * cap
    edges = kappa_centered_edges(desk_params, w)
    assert edges[0] == 0.0
    assert np.all(np.diff(edges) > 0)
    k = int(np.searchsorted(edges, cap, side="right")) - 1
    assert edges[k] < cap < edges[k + 1]  # the cap is interior to its bin
    widths = np.diff(edges)
    assert np.allclose(widths[1:], w)
    assert edges[-1] >= 2 * cap


def test_compare_histogram_columns(desk_params):
    cfg = ExperimentConfig(
        params=desk_params, n_arrivals=5000, n_reps=4000, master_seed=2026
    )
    ds = run_lip_experiment(cfg)
    const = tail_constant(ArrivalDist(desk_params.alpha, desk_params.mean))
    comp = compare_histogram(ds, desk_params, const)
    assert not comp.insufficient
    cap = kappa(desk_params)
    total_counts = sum(r["count"] for r in comp.rows)
    inside = ds.positive_lengths
    assert total_counts == np.count_nonzero(inside <= comp.rows[-1]["bin_hi"])
    # one-jump column integrates to 1 (it is a conditional density)
    ldp_mass = sum(r["ldp_density"] * (r["bin_hi"] - r["bin_lo"]) for r in comp.rows)
    assert ldp_mass == pytest.approx(1.0, rel=1e-9)
    for r in comp.rows:
        if r["bin_hi"] <= cap:
            assert r["hld_density"] == 0.0
        elif r["bin_lo"] < cap:
            assert math.isnan(r["hld_density"])
        else:
            assert r["hld_density"] >= 0.0


def sample_one_jump_law(params: ModelParams, n: int, seed: int) -> np.ndarray:
    """Inverse-CDF draws from the normalized one-jump law (atom included)."""
    cap = kappa(params)
    total = params.horizon * params.level ** -params.alpha
    atom_frac = mu1_tail(params, cap) / total
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    out = np.empty(n)
    for i, ui in enumerate(u):
        if ui <= atom_frac:
            out[i] = cap
        else:
            target = ui * total

            def gap(l: float) -> float:
                return mu1_tail(params, l) - target

            out[i] = brentq(gap, 1e-9, cap, xtol=1e-10)
    return out


def test_compare_histogram_synthetic_one_jump_law(desk_params):
    # draws from the exact normalized one-jump law must reproduce the
    # analytic column bin by bin; match the atom window to the atom bin so
    # the comparison is sharp there too
    n = 20_000
    lengths = sample_one_jump_law(desk_params, n, seed=5)
    cfg = ExperimentConfig(
        params=desk_params, n_arrivals=5000, n_reps=n, master_seed=0
    )
    ds = LipDataset(
        config=cfg,
        longest=lengths,
        n_periods=np.ones(n, dtype=np.int64),
        lost_work=np.zeros(n),
        idle_makeup=np.zeros(n),
        max_value=np.full(n, desk_params.buffer),
        min_value=np.zeros(n),
        final_value=np.zeros(n),
        input_end=np.zeros(n),
    )
    w = cfg.effective_bin_width
    comp = compare_histogram(
        ds, desk_params, tail_constant(ArrivalDist(1.44, 0.5)), atom_window=(w / 2, w / 2)
    )
    checked = 0
    for r in comp.rows:
        if r["count"] >= 50 and r["ldp_density"] > 0:
            rel_se = math.sqrt((1 - 0) / r["count"])
            assert abs(r["ratio_ldp"] - 1.0) <= 5 * rel_se
            checked += 1
    assert checked >= 8


def test_insufficient_data_is_value_not_error(desk_params):
    cfg = ExperimentConfig(params=desk_params, n_arrivals=5000, n_reps=5, master_seed=1)
    ds = LipDataset(
        config=cfg,
        longest=np.zeros(5),
        n_periods=np.zeros(5, dtype=np.int64),
        lost_work=np.zeros(5),
        idle_makeup=np.zeros(5),
        max_value=np.zeros(5),
        min_value=np.zeros(5),
        final_value=np.zeros(5),
        input_end=np.zeros(5),
    )
    comp = compare_histogram(ds, desk_params, 1.0)
    assert comp.insufficient and comp.rows == []


# --- one-jump rate verification ---------------------------------------------


def test_rate_check_analytic_values(desk_dist):
    checks = verify_rate_j1(desk_dist, 400, 400.0 ** 0.9, [1.0, 2.0], 2000, seed=0)
    assert checks[0].analytic == pytest.approx(1.0)
    assert checks[1].analytic == pytest.approx(2.0 ** -1.44)


def test_rate_check_smoke(desk_dist):
    lam = 2000.0 ** 0.9
    checks = verify_rate_j1(desk_dist, 2000, lam, [1.0], 30_000, seed=4)
    (c,) = checks
    assert c.hits > 0
    assert c.emp_prob == pytest.approx(c.hits / 30_000)
    assert c.scaled_se == pytest.approx(
        c.scaled_estimate / c.emp_prob * math.sqrt(c.emp_prob * (1 - c.emp_prob) / 30_000)
    )
    assert math.isfinite(c.z)
    # generous sanity corridor for a small pilot
    assert abs(c.z) < 8


def test_rate_check_deterministic(desk_dist):
    a = verify_rate_j1(desk_dist, 300, 170.0, [1.0, 1.5], 5000, seed=9)
    b = verify_rate_j1(desk_dist, 300, 170.0, [1.0, 1.5], 5000, seed=9)
    assert [(c.hits, c.scaled_estimate) for c in a] == [(c.hits, c.scaled_estimate) for c in b]


def test_rate_check_domain(desk_dist):
    with pytest.raises(ValueError):
        verify_rate_j1(desk_dist, 0, 100.0, [1.0], 100, 0)
    with pytest.raises(ValueError):
        verify_rate_j1(desk_dist, 100, 0.1, [1.0], 100, 0)  # lam below the centering
    with pytest.raises(ValueError):
        verify_rate_j1(desk_dist, 100, 100.0, [], 100, 0)


# --- planted two-jump sampler -----------------------------------------------


def test_planted_sampler_weights_and_support(desk_params):
    sample = planted_two_jump_sampler(desk_params, 4000, seed=8)
    assert sample.weight > 0 and math.isfinite(sample.weight)
    assert np.all(np.isfinite(sample.longest))
    cap = kappa(desk_params)
    # two jumps can never sustain more than twice the single-jump cap
    assert sample.longest.max() <= 2 * cap + 1e-9
    assert sample.lower_valid == pytest.approx(cap + sample.second_jump_floor / 0.5)


def test_planted_sampler_deterministic(desk_params):
    a = planted_two_jump_sampler(desk_params, 600, seed=3)
    b = planted_two_jump_sampler(desk_params, 600, seed=3)
    assert np.array_equal(a.longest, b.longest)


def test_planted_tail_matches_quadrature(desk_params):
    # importance-sampled two-jump tail against the quadrature value
    cap = kappa(desk_params)
    l = 1.2 * cap
    sample = planted_two_jump_sampler(desk_params, 120_000, seed=77)
    est, se = sample.tail_estimate(l)
    assert se > 0
    assert abs(est - mu2_tail(desk_params, l)) <= 3 * se


def test_planted_bin_masses_sum(desk_params):
    cap = kappa(desk_params)
    sample = planted_two_jump_sampler(desk_params, 20_000, seed=10)
    edges = np.linspace(1.05 * cap, 1.95 * cap, 11)
    masses, ses = sample.bin_masses(edges)
    est_lo, _ = sample.tail_estimate(float(edges[0]))
    est_hi, _ = sample.tail_estimate(float(edges[-1]))
    assert masses.sum() == pytest.approx(est_lo - est_hi, rel=1e-9)
    assert np.all(ses >= 0)


def test_planted_max_configuration_reaches_double_cap(desk_params):
    # the extreme configuration: buffer-filling first jump, then a jump of at
    # least the spare headroom landing a whisker before the level crossing
    # (at these non-dyadic parameters the exact touch rounds below the level)
    cap = kappa(desk_params)
    u1 = 50.0
    gap = cap * (1.0 - 1e-10)
    spare = (1.0 - desk_params.theta) * desk_params.buffer
    spec = JumpSpec(
        times=(u1, u1 + gap), sizes=(desk_params.buffer, spare + 1.0), drift=-0.5
    )
    qp = skorohod_reflect(h_j_path(spec, desk_params.horizon), desk_params.buffer)
    assert longest_intense(qp, desk_params.level) == pytest.approx(2 * cap, rel=1e-9)
