"""The ``qlocfrob`` command.

    qlocfrob axioms        randomized structural checks
    qlocfrob qloc-homology homology of the invariant operator complexes
    qlocfrob dioperadic    Thom forms and every weight-2 obstruction
    qlocfrob nogo          the pipeline through the genus-2 generator

Each command prints a summary, writes a JSON report (to ``--out`` or
standard output) and exits with 0 exactly when every check passed.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .exact import format_rational
from .frob import catalog_by_id, check_record, generator_catalog
from .obstruction import PipelineConfig, gauge_trials, run_dioperadic, run_nogo, seed_trials
from .properties import PROPERTIES, frob_sign_agrees, frob_sign_cases, frob_symbolic_laws, run_property
from .qloc import homology_dims
from .qloc import to_text as op_to_text
from .report import Check, Report, check_equal

COMMANDS = ("axioms", "qloc-homology", "dioperadic", "nogo")
HOMOLOGY_ARITIES = ((1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1))


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    window: Fraction = Fraction(2)
    solve_window: Fraction = Fraction(2)
    max_window: Fraction = Fraction(3)
    trials: int = 50
    seed: int = 0
    method: str = "paper"
    out: Optional[str] = None
    dump_ops: Optional[str] = None
    robustness: int = 0
    arity: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError("unknown command %r" % self.command)
        for name in ("window", "solve_window", "max_window"):
            v = Fraction(getattr(self, name))
            if v < 0 or (2 * v).denominator != 1:
                raise UsageError("--%s must be a non-negative half-integer" % name.replace("_", "-"))
            object.__setattr__(self, name, v)
        if not self.window <= self.solve_window <= self.max_window:
            raise UsageError("need window <= solve-window <= max-window")
        if self.trials < 1:
            raise UsageError("--trials must be at least 1")
        if self.robustness < 0:
            raise UsageError("--robustness must be non-negative")
        if self.method not in ("paper", "solved"):
            raise UsageError("--method must be paper or solved")

    def pipeline(self) -> PipelineConfig:
        return PipelineConfig(solve_window=self.solve_window, genus_window=self.solve_window + 1,
                              max_window=self.max_window, method=self.method, seed=self.seed)

    def params(self) -> Dict[str, object]:
        d = dataclasses.asdict(self)
        d.pop("command")
        return d


# ---------------------------------------------------------------- commands

def cmd_axioms(cfg: RunConfig) -> Report:
    rep = Report("axioms", cfg.params())
    for name in PROPERTIES:
        r = run_property(name, cfg.trials, cfg.seed)
        rep.add(Check("%s (%d trials)" % (name, r.trials), 0, r.failures, r.passed))
    for name, ok in frob_symbolic_laws().items():
        rep.add(check_equal(name, True, ok))
    cases = frob_sign_cases()
    bad = sum(1 for c in cases if not frob_sign_agrees(*c))
    rep.add(Check("Frob_1 signs vs evaluated classes (%d wirings)" % len(cases), 0, bad, bad == 0))
    cat = catalog_by_id()
    problems = [p for r in generator_catalog() for p in check_record(r, cat)]
    rep.add(check_equal("catalog records consistent", [], problems))
    return rep


def cmd_qloc_homology(cfg: RunConfig) -> Report:
    rep = Report("qloc-homology", cfg.params())
    arities = [cfg.arity] if cfg.arity else HOMOLOGY_ARITIES
    for m, n in arities:
        expected = {-m: 1, 1 - m: 1}
        at_w = homology_dims(m, n, cfg.window)
        at_next = homology_dims(m, n, cfg.window + 1)
        rep.add(check_equal("H(%d,%d) at window %s" % (m, n, format_rational(cfg.window)), expected, at_w))
        rep.add(check_equal("H(%d,%d) stable at window %s" % (m, n, format_rational(cfg.window + 1)),
                            at_w, at_next))
    return rep


def _pipeline_report(name: str, cfg: RunConfig, run) -> Report:
    rep = Report(name, cfg.params())
    rep.extend(run.checks)
    rep.extra["generators"] = {k: r.to_dict() for k, r in run.reports.items()}
    if cfg.dump_ops:
        _dump(cfg.dump_ops, run)
    return rep


def _dump(path: str, run) -> None:
    os.makedirs(path, exist_ok=True)
    for gid, r in run.reports.items():
        with open(os.path.join(path, "%s.obstruction.qop" % gid), "w") as fh:
            fh.write(op_to_text(r.obstruction))
        if r.primitive is not None:
            with open(os.path.join(path, "%s.value.qop" % gid), "w") as fh:
                fh.write(op_to_text(r.primitive))


def cmd_dioperadic(cfg: RunConfig) -> Report:
    return _pipeline_report("dioperadic", cfg, run_dioperadic(cfg.pipeline()))


def cmd_nogo(cfg: RunConfig) -> Report:
    rep = _pipeline_report("nogo", cfg, run_nogo(cfg.pipeline()))
    if cfg.robustness:
        target = [Fraction(-1, 12)] * cfg.robustness
        rep.add(check_equal("final class, solved method, %d seeds" % cfg.robustness, target,
                            seed_trials(cfg.pipeline(), cfg.robustness)))
        rep.add(check_equal("final class, %d random gauge changes" % cfg.robustness, target,
                            gauge_trials(cfg.pipeline(), cfg.robustness)))
    return rep


DISPATCH = {"axioms": cmd_axioms, "qloc-homology": cmd_qloc_homology,
            "dioperadic": cmd_dioperadic, "nogo": cmd_nogo}


def run(cfg: RunConfig) -> Report:
    t = time.perf_counter()
    rep = DISPATCH[cfg.command](cfg)
    rep.elapsed_ms = int(1000 * (time.perf_counter() - t))
    return rep


# ---------------------------------------------------------------- argument handling

_FIELDS = {"window": Fraction, "solve_window": Fraction, "max_window": Fraction, "trials": int,
           "seed": int, "method": str, "out": str, "dump_ops": str, "robustness": int}


def read_config_file(path: str) -> Dict[str, object]:
    """``key = value`` lines; ``#`` starts a comment; dashes and underscores are interchangeable."""
    out: Dict[str, object] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError("%s:%d: expected key=value" % (path, lineno))
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _FIELDS:
                raise UsageError("%s:%d: unknown key %r" % (path, lineno, key))
            try:
                out[key] = _FIELDS[key](value)
            except ValueError:
                raise UsageError("%s:%d: bad value %r for %s" % (path, lineno, value, key))
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qlocfrob", description="Exact checks for quasilocal Frobenius structures.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--window", type=Fraction, help="window for homology (default 2)")
    p.add_argument("--solve-window", type=Fraction, help="window for primitives (default 2)")
    p.add_argument("--max-window", type=Fraction, help="largest window searched for a G2 primitive (default 3)")
    p.add_argument("--trials", type=int, help="randomized instances per property (default 50)")
    p.add_argument("--seed", type=int, help="seed for every random choice (default 0)")
    p.add_argument("--method", choices=("paper", "solved"), help="use transcribed values or solve (default paper)")
    p.add_argument("--out", help="write the JSON report here instead of standard output")
    p.add_argument("--dump-ops", help="directory for obstructions and values in text form")
    p.add_argument("--robustness", type=int, help="nogo: extra seeded and gauge-perturbed runs (default 0)")
    p.add_argument("--arity", type=int, nargs=2, metavar=("M", "N"), help="qloc-homology: a single arity")
    return p


def config_from_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    values: Dict[str, object] = read_config_file(args.config) if args.config else {}
    for key in _FIELDS:
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    if args.arity:
        m, n = args.arity
        if m < 1 or n < 1:
            raise UsageError("arities must be positive")
        values["arity"] = (m, n)
    return RunConfig(args.command, **values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = config_from_args(argv)
    except UsageError as e:
        print("qlocfrob: error: %s" % e, file=sys.stderr)
        return 2
    rep = run(cfg)
    text = rep.to_json()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
        print(rep.summary())
    else:
        print(text)
        print(rep.summary(), file=sys.stderr)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
