#!/usr/bin/env python3
"""Overlay figure: conditional histogram with both analytic density curves,
a vertical marker at the one-jump cap, and the atom window shaded.

The cap defaults to the value recorded in the hist.csv header comments.
"""

from __future__ import annotations

import argparse
import sys

from lipqfigs import FigureSpec, cap_from_comments, load_hist_csv, plot_hist_overlay


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--hist", required=True, help="hist.csv from the study pipeline")
    parser.add_argument("--out", required=True, help="output image path (png)")
    parser.add_argument("--cap", type=float, default=None, help="one-jump cap (default: from the csv header)")
    parser.add_argument("--eps-lo", type=float, default=None, help="atom window below the cap (default 5%% of cap)")
    parser.add_argument("--eps-hi", type=float, default=None, help="atom window above the cap (default 5%% of cap)")
    parser.add_argument("--log-y", action="store_true", help="logarithmic density axis")
    args = parser.parse_args(argv)

    cap = args.cap
    if cap is None:
        _cols, comments = load_hist_csv(args.hist)
        cap = cap_from_comments(comments)
        if cap is None:
            parser.error("--cap not given and not recorded in the csv header")
    spec = FigureSpec(
        hist_csv=args.hist,
        out_path=args.out,
        cap=cap,
        eps_lo=args.eps_lo if args.eps_lo is not None else 0.05 * cap,
        eps_hi=args.eps_hi if args.eps_hi is not None else 0.05 * cap,
        log_y=args.log_y,
    )
    out = plot_hist_overlay(spec)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
