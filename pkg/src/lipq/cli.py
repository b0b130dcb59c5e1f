"""Command-line interface.

Subcommands: ``simulate`` (replication study), ``measures`` (tabulate the
analytic tails on a grid), ``compare`` (full histogram-vs-analytic pipeline),
``verify-rates`` (first-level walk rate check).  A flat key=value config file
can seed any flag; explicit flags win.  On failure a machine-readable error
record goes to stderr and the exit code is nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .harness import (
    ExperimentConfig,
    compare_histogram,
    hist_comments,
    run_lip_experiment,
    verify_rate_j1,
    write_summary_json,
    write_table,
)
from .heavytail import ArrivalDist, tail_constant
from .measures import ModelParams, atom_estimate, kappa, mu1_atom, tabulate_measures

_EXIT_FAILURE = 1
_EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # emit the machine-readable record too
        print(json.dumps({"error": {"type": "usage", "message": message}}), file=sys.stderr)
        raise SystemExit(_EXIT_USAGE)


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="flat key=value file; flags override")
    common.add_argument("--alpha", type=float, default=1.44, help="arrival tail index")
    common.add_argument("--mean", type=float, default=0.5, help="mean work per slot")
    common.add_argument("--rate", type=float, default=1.0, help="service rate")
    common.add_argument("--buffer", type=float, default=2000.0, help="buffer capacity")
    common.add_argument("--theta", type=float, default=0.85, help="intense threshold fraction")
    common.add_argument("--arrivals", type=int, default=5000, help="arrival epochs = horizon")
    common.add_argument("--reps", type=int, default=1000, help="replication count")
    common.add_argument("--seed", type=int, default=0, help="master seed")
    common.add_argument("--bin-width", type=float, default=None, help="histogram bin width (default 5%% of the cap)")
    common.add_argument("--grid", type=str, default=None, help="'lo:hi:n' or comma-separated values")
    common.add_argument("--out", type=str, default="out", help="output directory")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="table format")
    common.add_argument("--workers", type=int, default=1, help="concurrent batches")
    common.add_argument("--tail-ref", type=float, default=None, help="finite reference scale for the tail constant (default: asymptotic)")

    parser = _Parser(prog="lipq", description="Buffered heavy-tailed queues and long intense periods")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="replication study -> runs + summary")
    sub.add_parser("measures", parents=[common], help="tabulate analytic tails on a grid")
    sub.add_parser("compare", parents=[common], help="experiment + histogram comparison + measures")
    rates = sub.add_parser("verify-rates", parents=[common], help="first-level walk rate check")
    rates.add_argument("--walks", type=int, default=100_000, help="number of walks")
    rates.add_argument("--steps", type=int, default=10_000, help="steps per walk")
    rates.add_argument("--lambda-power", type=float, default=0.9, help="deviation scale exponent: lam = steps**power")
    return parser


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line is not key=value: {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = val
    return values


_CONFIG_TYPES = {
    "alpha": float, "mean": float, "rate": float, "buffer": float, "theta": float,
    "arrivals": int, "reps": int, "seed": int, "bin_width": float, "grid": str,
    "out": str, "format": str, "workers": int, "tail_ref": float,
    "walks": int, "steps": int, "lambda_power": float,
}


def _apply_config_defaults(parser: _Parser, argv: list[str]) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=str, default=None)
    known, _ = pre.parse_known_args(argv)
    args = parser.parse_args(argv)
    if known.config:
        file_values = _read_config_file(known.config)
        unknown = set(file_values) - set(_CONFIG_TYPES)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        # flags override the file: reparse with file values as defaults
        defaults = {k: _CONFIG_TYPES[k](v) for k, v in file_values.items()}
        for action in parser._subparsers._group_actions[0].choices.values():  # type: ignore[union-attr]
            action.set_defaults(**{k: v for k, v in defaults.items()
                                   if any(a.dest == k for a in action._actions)})
        args = parser.parse_args(argv)
    return args


def _parse_grid(spec: str | None, default_lo: float, default_hi: float, default_n: int) -> np.ndarray:
    if spec is None:
        return np.linspace(default_lo, default_hi, default_n)
    if ":" in spec:
        lo_s, hi_s, n_s = spec.split(":")
        return np.linspace(float(lo_s), float(hi_s), int(n_s))
    return np.asarray([float(v) for v in spec.split(",")])


def _model_params(args: argparse.Namespace) -> ModelParams:
    return ModelParams(
        alpha=args.alpha,
        mean=args.mean,
        rate=args.rate,
        theta=args.theta,
        buffer=args.buffer,
        horizon=float(args.arrivals),
    )


def _tail_const(args: argparse.Namespace) -> float:
    dist = ArrivalDist(args.alpha, args.mean)
    return tail_constant(dist, args.tail_ref)


def _summary_core(args: argparse.Namespace, params: ModelParams) -> dict:
    const = _tail_const(args)
    cap, atom_mass = mu1_atom(params)
    return {
        "params": {
            "alpha": params.alpha, "mean": params.mean, "rate": params.rate,
            "theta": params.theta, "buffer": params.buffer, "horizon": params.horizon,
        },
        "kappa": cap,
        "tail_constant": const,
        "tail_reference": args.tail_ref,
        "atom_mass": atom_mass,
        "atom_probability": atom_estimate(params, const),
        "analytic_prob_positive": const * params.horizon * params.level ** -params.alpha,
    }


def _run_experiment(args: argparse.Namespace, params: ModelParams):
    config = ExperimentConfig(
        params=params,
        n_arrivals=args.arrivals,
        n_reps=args.reps,
        master_seed=args.seed,
        bin_width=args.bin_width,
        out_dir=args.out,
        out_format=args.format,
    )
    return run_lip_experiment(config, workers=args.workers)


def _cmd_simulate(args: argparse.Namespace) -> int:
    params = _model_params(args)
    dataset = _run_experiment(args, params)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ext = args.format
    write_table(
        out / f"runs.{ext}",
        dataset.runs_rows(),
        [f"master_seed = {args.seed}; replication r uses SeedSequence(master, spawn_key=(r,))"],
        fmt=args.format,
    )
    p_hat, se = dataset.prob_positive()
    summary = _summary_core(args, params)
    summary.update(
        {
            "n_reps": args.reps,
            "master_seed": args.seed,
            "prob_positive": p_hat,
            "prob_positive_se": se,
            "n_positive": int(np.count_nonzero(dataset.longest > 0)),
            "max_longest": float(dataset.longest.max()),
            "mean_lost_work": float(dataset.lost_work.mean()),
        }
    )
    write_summary_json(out / "summary.json", summary)
    print(f"wrote {out}/runs.{ext} and {out}/summary.json "
          f"(prob_positive={p_hat:.3e} +- {se:.1e})")
    return 0


def _cmd_measures(args: argparse.Namespace) -> int:
    params = _model_params(args)
    cap = kappa(params)
    grid = _parse_grid(args.grid, 0.05 * cap, 2.1 * cap, 50)
    rows = tabulate_measures(params, _tail_const(args), grid)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_table(
        out / f"measures.{args.format}",
        rows,
        ["columns: level,mu1_tail,mu2_tail,combined",
         f"one_jump_cap = {cap!r}; mu2_tail is NaN at or below the cap, 0 beyond twice it"],
        fmt=args.format,
    )
    print(f"wrote {out}/measures.{args.format} ({len(rows)} rows)")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    params = _model_params(args)
    const = _tail_const(args)
    dataset = _run_experiment(args, params)
    comp = compare_histogram(dataset, params, const, bin_width=args.bin_width)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ext = args.format

    write_table(
        out / f"runs.{ext}",
        dataset.runs_rows(),
        [f"master_seed = {args.seed}; replication r uses SeedSequence(master, spawn_key=(r,))"],
        fmt=args.format,
    )
    cap = kappa(params)
    grid = _parse_grid(args.grid, 0.05 * cap, 2.1 * cap, 50)
    write_table(
        out / f"measures.{ext}",
        tabulate_measures(params, const, grid),
        ["columns: level,mu1_tail,mu2_tail,combined"],
        fmt=args.format,
    )

    p_hat, se = dataset.prob_positive()
    summary = _summary_core(args, params)
    summary.update(
        {
            "n_reps": args.reps,
            "master_seed": args.seed,
            "prob_positive": p_hat,
            "prob_positive_se": se,
            "n_positive": comp.n_positive,
            "insufficient_data": comp.insufficient,
            "max_longest": float(dataset.longest.max()),
        }
    )
    write_summary_json(out / "summary.json", summary)

    if comp.insufficient:
        print(f"insufficient data: {comp.reason}; wrote runs/measures/summary to {out}")
        return 0
    write_table(out / f"hist.{ext}", comp.rows, hist_comments(comp, params, const), fmt=args.format)
    print(f"wrote {out}/runs.{ext}, {out}/hist.{ext}, {out}/measures.{ext}, {out}/summary.json "
          f"({comp.n_positive} positive periods)")
    return 0


def _cmd_verify_rates(args: argparse.Namespace) -> int:
    dist = ArrivalDist(args.alpha, args.mean)
    lam = float(args.steps) ** args.lambda_power
    xs = _parse_grid(args.grid, 1.0, 2.0, 3) if args.grid else np.asarray([1.0, 1.5, 2.0])
    checks = verify_rate_j1(dist, args.steps, lam, xs, args.walks, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = [
        {
            "threshold": c.threshold,
            "hits": c.hits,
            "emp_prob": c.emp_prob,
            "scaled_estimate": c.scaled_estimate,
            "scaled_se": c.scaled_se,
            "analytic": c.analytic,
            "z": c.z,
            "low_power": c.low_power,
        }
        for c in checks
    ]
    write_table(
        out / f"rates.{args.format}",
        rows,
        [f"walks={args.walks} steps={args.steps} lam={lam!r} alpha={dist.alpha} mean={dist.mean}"],
        fmt=args.format,
    )
    write_summary_json(
        out / "summary.json",
        {
            "walks": args.walks,
            "steps": args.steps,
            "lam": lam,
            "alpha": dist.alpha,
            "mean": dist.mean,
            "seed": args.seed,
            "max_abs_z": max(abs(c.z) for c in checks if c.hits > 0),
            "checks": rows,
        },
    )
    for c in checks:
        flag = " LOW-POWER" if c.low_power else ""
        print(f"x={c.threshold:g}: scaled={c.scaled_estimate:.4f} analytic={c.analytic:.4f} "
              f"z={c.z:+.2f} hits={c.hits}{flag}")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "measures": _cmd_measures,
    "compare": _cmd_compare,
    "verify-rates": _cmd_verify_rates,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = _apply_config_defaults(parser, list(argv) if argv is not None else sys.argv[1:])
        return _COMMANDS[args.command](args)
    except SystemExit:
        raise
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not masks
        record = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(record), file=sys.stderr)
        return _EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
