"""Named pass/fail checks and the JSON report built from them."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List

from .exact import format_rational


def render(value: Any) -> Any:
    """Exact values become strings; containers are rendered recursively."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, dict):
        return {str(k): render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    return str(value)


@dataclass
class Check:
    name: str
    expected: Any
    actual: Any
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "expected": render(self.expected),
                "actual": render(self.actual), "pass": bool(self.passed)}


def check_equal(name: str, expected, actual) -> Check:
    return Check(name, expected, actual, expected == actual)


@dataclass
class Report:
    command: str
    params: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    elapsed_ms: int = 0
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    def to_dict(self) -> Dict[str, Any]:
        out = {"command": self.command, "params": render(self.params),
               "checks": [c.to_dict() for c in self.checks],
               "pass": self.passed, "elapsed_ms": self.elapsed_ms}
        if self.extra:
            out["details"] = render(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def summary(self) -> str:
        lines = ["%s: %s (%d checks, %d ms)" % (self.command, "PASS" if self.passed else "FAIL",
                                               len(self.checks), self.elapsed_ms)]
        for c in self.checks:
            d = c.to_dict()
            lines.append("  [%s] %s: expected %s, got %s" % (
                "ok" if c.passed else "FAIL", c.name, d["expected"], d["actual"]))
        return "\n".join(lines)
