#!/usr/bin/env python3
"""Run the pipeline through the genus-2 generator and print each obstruction class.

    python3 scripts/reproduce_nogo.py [--method solved] [--seed N]
"""

import argparse
import sys

from qlocfrob.exact import format_rational
from qlocfrob.obstruction import G2_terms, PipelineConfig, run_nogo
from qlocfrob.qloc import to_text


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--method", choices=("paper", "solved"), default="paper")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    run = run_nogo(PipelineConfig(method=args.method, seed=args.seed), term_checks=args.method == "paper")
    for gid, rep in run.reports.items():
        q = "-" if rep.class_coeff is None else format_rational(rep.class_coeff)
        print("%-13s class %-6s value %s" % (gid, q, rep.method or "none"))
    if args.method == "paper":
        for i, t in enumerate(G2_terms(run.eta), 1):
            print("\nG2 term %d:\n%s" % (i, to_text(t).rstrip()))
    print("\nobstruction(G2):\n%s" % to_text(run.reports["G2"].obstruction).rstrip())
    failed = [c for c in run.checks if not c.passed]
    for c in failed:
        print("FAILED:", c.name)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
