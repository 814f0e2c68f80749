from __future__ import annotations

import json
from fractions import Fraction

import pytest

from drinfeld_torsion.cinfty import CInfty
from drinfeld_torsion.cli import main
from drinfeld_torsion.drinfeld import carlitz_period
from drinfeld_torsion.pipeline import (ConfigError, bundled_configs, load_config, parse_config,
                                       parse_lattice_literal, report_json, run)


def test_bundled_configs_present():
    assert {"carlitz-theta", "carlitz-deg2", "rank2-deg2", "rank2-theta"} <= set(bundled_configs())


def test_parse_config_values():
    cfg = parse_config("q = 3\np = theta^2 + 1\nn = 1\nmodule = lattice\nlattice = theta^(-1/2)*pi~; pi~\n"
                       "suites = torsion, galois  # two suites\n")
    assert cfg.n == 1 and cfg.lattice == ["theta^(-1/2)*pi~", "pi~"]
    assert cfg.suites == ["torsion", "galois"]
    assert cfg.T == cfg.prec + 16


@pytest.mark.parametrize("text,fragment", [
    ("q = 3\np = theta^2+2*theta+1\n", "reducible"),
    ("q = 4\np = theta\n", "prime"),
    ("q = 3\np = theta\nbogus = 1\n", "unknown key"),
    ("q = 3\np = theta\nn = x\n", "integer"),
    ("q = 3\np = theta\nsuites = torsion, nope\n", "unknown suite"),
    ("q = 3\np = theta\nmodule = lattice\n", "lattice basis"),
    ("q = 3\np = theta\nmodule = lattice\nlattice = theta^(1/0)\n", "zero denominator"),
])
def test_config_errors_name_location(text, fragment):
    with pytest.raises(ConfigError) as info:
        parse_config(text, "x.cfg")
    assert fragment in str(info.value)
    assert "x.cfg:" in str(info.value)


def test_lattice_literals():
    C = CInfty(3, 2, prec=32, guard=32)
    pi = carlitz_period(C)
    assert parse_lattice_literal("pi~", C).approx_eq(pi)
    assert parse_lattice_literal("theta^(-1/2)*pi~", C).approx_eq(pi.shift(Fraction(-1, 2)))
    x = parse_lattice_literal("2*w^2*theta - theta^(2) + 1", C)
    want = C.theta().scale(C.field.gen() ** 2).scale(2) - C.theta(2) + C.one()
    assert (x - want).is_zero()
    with pytest.raises(ConfigError):
        parse_lattice_literal("theta^", C)


def test_reducible_prime_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text("q = 3\np = theta^2 + 2*theta + 1\nn = 1\n")
    assert main(["verify", "--config", str(path)]) == 2
    assert "reducible" in capsys.readouterr().err


def test_unknown_config_exit_code(capsys):
    assert main(["torsion", "--config", "no-such-config"]) == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["verify"])
    assert info.value.code == 2


def test_verify_subset_writes_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["verify", "--config", "carlitz-deg2", "--suite", "torsion", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["schema"] == "drinfeld-torsion-report/1"
    assert [s["suite"] for s in report["suites"]] == ["torsion"]
    assert report["verdict"] == "pass"
    assert "PASS" in capsys.readouterr().out


def test_failing_check_gives_exit_one(tmp_path):
    # a precision far below the truncation needs makes the identities fail honestly
    path = tmp_path / "weak.cfg"
    path.write_text("q = 3\np = theta\nn = 1\nguard = 0\ntrunc = 8\nprec = 24\nsuites = agf\n")
    assert main(["verify", "--config", str(path), "--out", str(tmp_path / "w.json")]) == 1


def test_reports_are_deterministic():
    cfg = load_config("carlitz-theta")
    a = report_json(run(cfg, suites=["galois", "modular"], seed=9))
    b = report_json(run(load_config("carlitz-theta"), suites=["galois", "modular"], seed=9))
    assert a == b


def test_demo_prints_walkthrough(capsys):
    assert main(["demo"]) == 0
    out = capsys.readouterr().out
    assert "torsion values" in out and "θ" in out
