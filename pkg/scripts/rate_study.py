#!/usr/bin/env python3
"""First-level rate verification at full scale.

Centered heavy-tailed increments, 1e4-step walks, deviation scale n**0.9:
the scaled sup-crossing frequencies should match x**-alpha within Monte
Carlo error.  About six minutes at the default walk count.

Usage: python scripts/rate_study.py [OUT_DIR] [--walks N]
"""

from __future__ import annotations

import argparse
import sys

from lipq.cli import main as lipq_main


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", nargs="?", default="out/rates")
    parser.add_argument("--walks", type=int, default=1_000_000)
    parser.add_argument("--seed", type=int, default=20260809)
    args = parser.parse_args(argv)
    return lipq_main(
        [
            "verify-rates",
            "--alpha", "1.44", "--mean", "0.2",
            "--steps", "10000", "--lambda-power", "0.9",
            "--walks", str(args.walks),
            "--seed", str(args.seed),
            "--grid", "1,1.5,2",
            "--out", args.out,
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
