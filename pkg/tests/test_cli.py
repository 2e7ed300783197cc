"""The command-line interface."""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from qlocfrob.cli import RunConfig, UsageError, config_from_args, main, read_config_file, run


def _strip(d):
    d = dict(d)
    d.pop("elapsed_ms")
    return d


def test_defaults():
    cfg = config_from_args(["nogo"])
    assert (cfg.window, cfg.solve_window, cfg.max_window, cfg.trials, cfg.seed, cfg.method) == (2, 2, 3, 50, 0, "paper")


def test_trials_zero_is_a_usage_error(capsys):
    assert main(["axioms", "--trials", "0"]) == 2
    assert "trials" in capsys.readouterr().err


def test_window_order_is_enforced():
    with pytest.raises(UsageError):
        RunConfig("nogo", window=3, solve_window=2)
    with pytest.raises(UsageError):
        RunConfig("nogo", window=Fraction(1, 3))


def test_config_file_and_override(tmp_path):
    p = tmp_path / "run.conf"
    p.write_text("# comment\nseed = 7\nmax-window = 5/2\ntrials=3\n")
    assert read_config_file(str(p)) == {"seed": 7, "max_window": Fraction(5, 2), "trials": 3}
    cfg = config_from_args(["axioms", "--config", str(p), "--seed", "9"])
    assert (cfg.seed, cfg.max_window, cfg.trials) == (9, Fraction(5, 2), 3)
    p.write_text("colour = blue\n")
    with pytest.raises(UsageError):
        read_config_file(str(p))


def test_axioms_deterministic():
    a = run(RunConfig("axioms", trials=3, seed=4)).to_dict()
    b = run(RunConfig("axioms", trials=3, seed=4)).to_dict()
    assert a["pass"] and _strip(a) == _strip(b)


def test_homology_single_arity():
    rep = run(RunConfig("qloc-homology", arity=(2, 1)))
    assert rep.passed and len(rep.checks) == 2


def test_nogo_report_and_dump(tmp_path):
    out = tmp_path / "nogo.json"
    ops = tmp_path / "ops"
    assert main(["nogo", "--out", str(out), "--dump-ops", str(ops)]) == 0
    d = json.loads(out.read_text())
    assert d["command"] == "nogo" and d["pass"] is True
    assert d["details"]["generators"]["G2"]["class_coeff"] == "-1/12"
    assert any(c["name"] == "class of obstruction(G2)" and c["actual"] == "-1/12" for c in d["checks"])
    text = (ops / "G2.obstruction.qop").read_text()
    assert text.startswith("op m=1 n=1 deg=0") and "coeff: -1/12" in text
    from qlocfrob.qloc import from_text
    assert from_text((ops / "comult_assoc.value.qop").read_text()).m == 1


def test_dioperadic_to_stdout(capsys):
    assert main(["dioperadic"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["pass"] and all(c["pass"] for c in d["checks"])


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "qlocfrob", "qloc-homology", "--arity", "1", "1", "--window", "1",
                        "--solve-window", "2"], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert json.loads(r.stdout)["pass"] is True
