#!/usr/bin/env python3
"""Search random words in T_{r,m} for rotation numbers p/q with gcd(m-1, q)
not dividing r, and print the smallest such map found with its periodic orbit."""
import argparse
import json
import math

from plcircle.arith import GroupContext, format_rational
from plcircle.codec import map_to_json
from plcircle.harness import SplitMix64, WordSpec, default_generators, random_word
from plcircle.rotnum import exact_rational_rho, order_of, periodic_point


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--r", type=int, default=1)
    ap.add_argument("--words", type=int, default=2000)
    ap.add_argument("--length", type=int, default=8)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    ctx = GroupContext(args.r, (args.m,))
    spec = WordSpec(tuple(default_generators(ctx)), args.length, args.seed)
    rng = SplitMix64(args.seed)
    best, hits = None, 0
    for _ in range(args.words):
        w = random_word(spec, rng)
        rho = exact_rational_rho(w)
        if rho is not None and args.r % math.gcd(args.m - 1, rho.q) != 0:
            hits += 1
            if best is None or len(w.lefts) < len(best[0].lefts):
                best = (w, rho)
    out = {"words": args.words, "hits": hits}
    if best:
        w, rho = best
        x = periodic_point(w, rho.p, rho.q)
        orbit = [x]
        for _ in range(rho.q):
            orbit.append(w.lift(orbit[-1]))
        out.update(map=map_to_json(w), rho=rho.to_json(), finiteOrder=order_of(w, 64) is not None,
                   periodicOrbit=[format_rational(v) for v in orbit])
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
