#!/usr/bin/env python3
"""Run the three verification suites at their default desk-scale ranges and
write one JSON report per suite into an output directory."""
import argparse
import pathlib
import sys
from dataclasses import dataclass

from plcircle import harness


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    m_range: tuple = tuple(range(2, 7))
    r_range: tuple = tuple(range(1, 7))
    q_range: tuple = tuple(range(1, 13))
    samples: int = 3
    bases: tuple = ((2, 3), (3, 5), (2, 3, 5))
    k_range: tuple = (1, 2)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="reports")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = SuiteConfig(seed=args.seed)
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reports = [
        harness.run_thm1_suite(cfg.m_range, cfg.r_range, cfg.q_range, seed=cfg.seed, samples=cfg.samples),
        harness.run_thm2_suite(cfg.bases, cfg.k_range, seed=cfg.seed),
        harness.run_lemma2_suite(harness.default_lemma2_inputs(), seed=cfg.seed),
    ]
    failed = False
    for rep in reports:
        (out / f"{rep.suite}.json").write_text(rep.dumps() + "\n")
        s = rep.summary()
        print(f"{rep.suite}: pass={s['pass']} fail={s['fail']} skip={s['skip']} ({rep.runtime_ms} ms)",
              file=sys.stderr)
        for c in rep.cases:
            if c.verdict == "fail":
                print(f"  fail {c.params} [{c.kind}] {c.detail}", file=sys.stderr)
        failed |= not rep.ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
