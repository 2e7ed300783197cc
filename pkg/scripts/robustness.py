#!/usr/bin/env python3
"""Final genus-2 class under solved values with several seeds and under random gauge changes.

    python3 scripts/robustness.py [--trials 5] [--seed 0]
"""

import argparse

from qlocfrob.exact import format_rational
from qlocfrob.obstruction import PipelineConfig, gauge_trials, seed_trials


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = PipelineConfig(seed=args.seed)
    print("solved seeds: ", [format_rational(q) for q in seed_trials(cfg, args.trials)])
    print("gauge changes:", [format_rational(q) for q in gauge_trials(cfg, args.trials)])


if __name__ == "__main__":
    main()
