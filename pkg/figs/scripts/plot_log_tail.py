#!/usr/bin/env python3
"""Log-scale tail figure: empirical bin densities beyond the one-jump cap
against the two-jump density curve.

Exits with an error message (and writes nothing) when no bins beyond the cap
carry a positive two-jump density.
"""

from __future__ import annotations

import argparse
import sys

from lipqfigs import FigureSpec, cap_from_comments, load_hist_csv, plot_log_tail


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--hist", required=True, help="hist.csv from the study pipeline")
    parser.add_argument("--out", required=True, help="output image path (png)")
    parser.add_argument("--cap", type=float, default=None, help="one-jump cap (default: from the csv header)")
    args = parser.parse_args(argv)

    cap = args.cap
    if cap is None:
        _cols, comments = load_hist_csv(args.hist)
        cap = cap_from_comments(comments)
        if cap is None:
            parser.error("--cap not given and not recorded in the csv header")
    spec = FigureSpec(hist_csv=args.hist, out_path=args.out, cap=cap, eps_lo=1.0, eps_hi=1.0)
    try:
        out = plot_log_tail(spec)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
