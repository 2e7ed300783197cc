"""JSON reports."""

import json
from fractions import Fraction

from qlocfrob.report import Check, Report, check_equal, render


def test_render_is_exact():
    assert render(Fraction(-1, 12)) == "-1/12"
    assert render({(1, 1): Fraction(1, 2)}) == {"(1, 1)": "1/2"}
    assert render([1, True, None]) == ["1", True, None]


def test_pass_iff_every_check_passes():
    r = Report("x", {"seed": 0})
    r.add(check_equal("a", 1, 1))
    assert r.passed
    r.add(Check("b", 0, 2, False))
    assert not r.passed
    d = json.loads(r.to_json())
    assert set(d) == {"command", "params", "checks", "pass", "elapsed_ms"}
    assert d["checks"][1] == {"name": "b", "expected": "0", "actual": "2", "pass": False}
    assert "FAIL" in r.summary()


def test_json_round_trip():
    r = Report("nogo", {"w": Fraction(5, 2)}, [check_equal("q", Fraction(-1, 12), Fraction(-1, 12))], 12)
    d = r.to_dict()
    assert json.loads(json.dumps(d)) == d
