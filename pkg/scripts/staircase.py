#!/usr/bin/env python3
"""Rotation number over a one-parameter family, written as CSV.

Default: the two-break family with left slope 2 and right slope t in [1/20, 19/20].
"""
import argparse
import sys

from plcircle.arith import Q
from plcircle.harness import export_staircase, rows_to_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=["rotation", "boshernitzan"], default="boshernitzan")
    ap.add_argument("--from", dest="t0", default="1/20")
    ap.add_argument("--to", dest="t1", default="19/20")
    ap.add_argument("--l1", default="2")
    ap.add_argument("--samples", type=int, default=19)
    ap.add_argument("--iters", type=int, default=1000)
    ap.add_argument("--depth", type=int, default=16)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()
    extra = {"l1": Q(args.l1)} if args.family == "boshernitzan" else {}
    rows = export_staircase(args.family, args.t0, args.t1, args.samples,
                            iters=args.iters, depth=args.depth, **extra)
    text = rows_to_csv(rows)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
