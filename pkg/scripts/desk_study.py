#!/usr/bin/env python3
"""End-to-end scaled-down study: simulate, compare against the analytic
tails, write all tables, and (when the figure package is installed) render
the two standard figures.

Usage: python scripts/desk_study.py [OUT_DIR] [--reps N] [--seed S]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from lipq.cli import main as lipq_main


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", nargs="?", default="out/desk")
    parser.add_argument("--reps", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=20260809)
    args = parser.parse_args(argv)

    rc = lipq_main(
        [
            "compare",
            "--alpha", "1.44", "--mean", "0.5", "--rate", "1.0",
            "--buffer", "2000", "--theta", "0.85",
            "--arrivals", "5000",
            "--reps", str(args.reps),
            "--seed", str(args.seed),
            "--out", args.out,
        ]
    )
    if rc != 0:
        return rc

    hist = Path(args.out) / "hist.csv"
    try:
        from lipqfigs import FigureSpec, cap_from_comments, load_hist_csv, plot_hist_overlay, plot_log_tail
    except ImportError:
        print("figure package not installed; tables written, figures skipped")
        return 0

    _cols, comments = load_hist_csv(hist)
    cap = cap_from_comments(comments)
    spec = FigureSpec(
        hist_csv=str(hist),
        out_path=str(Path(args.out) / "hist_overlay.png"),
        cap=cap,
        eps_lo=0.05 * cap,
        eps_hi=0.05 * cap,
    )
    plot_hist_overlay(spec)
    tail_spec = FigureSpec(
        hist_csv=str(hist),
        out_path=str(Path(args.out) / "log_tail.png"),
        cap=cap,
        eps_lo=0.05 * cap,
        eps_hi=0.05 * cap,
    )
    plot_log_tail(tail_spec)
    print(f"figures written to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
