#!/usr/bin/env python3
"""
CURVE-QE - Tests de l'interface en ligne de commande
"""

import json
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).parent
sys.path.insert(0, str(ROOT))

from core.experiments import parse_point  # noqa: E402
from main import build_parser, main  # noqa: E402

SIGNATURE = ROOT / "corpus" / "signature.json"


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    config = tmp_path / "config.json"
    config.write_text(
        json.dumps({
            "qe": {"sample_points": 40},
            "paths": {"corpus": str(ROOT / "corpus"), "signature": str(SIGNATURE)},
            "logging": {"file": str(tmp_path / "logs" / "curveqe.log")},
        }),
        encoding="utf-8",
    )
    return tmp_path


def run(workdir, *argv):
    out = workdir / "report.json"
    code = main([*argv, "--config", str(workdir / "config.json"), "--out", str(out)])
    return code, json.loads(out.read_text(encoding="utf-8"))


def test_parser_rejects_unknown_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["nope"])


def test_galois_command(workdir):
    code, report = run(workdir, "galois", "--a", "1")
    assert code == 0
    assert report["status"] == "pass"
    names = [c["name"] for c in report["checks"]]
    assert names == ["galois.function_field", "galois.rational[a=1]"]


def test_failing_certificate_sets_exit_code(workdir):
    # X^4 + X - 2 a la racine 1
    code, report = run(workdir, "galois", "--a", "-2")
    assert code == 1
    assert report["status"] == "fail"


def test_eval_command(workdir):
    code, report = run(workdir, "eval", "--formula", "(exists y (Circ x y))", "--point", "x=1/2")
    assert code == 0
    assert report["checks"][0]["details"]["value"] is True


def test_eval_without_point_is_an_error(workdir):
    code, report = run(workdir, "eval", "--formula", "(Parab x y)")
    assert code == 1
    assert report["checks"][0]["error"]["type"] == "CurveQEError"


def test_qe_single_formula_with_trace(workdir):
    code, report = run(workdir, "qe", "--formula", "parab_circ.sexp")
    assert code == 0
    details = report["checks"][0]["details"]
    assert details["trace_problems"] == []
    assert details["replay_matches"]
    assert details["equivalence"]["points_checked"] >= 40
    assert "trace" in details


def test_combi_small_range_markdown(workdir):
    out = workdir / "combi.md"
    code = main(["combi", "--n", "2..3", "--format", "markdown", "--out", str(out), "--config", str(workdir / "config.json")])
    assert code == 0
    assert out.read_text(encoding="utf-8").startswith("# curveqe")


def test_json_flag_prints_report(workdir, capsys):
    code = main(["galois", "--a", "1", "--json", "--out", str(workdir / "r.json"), "--config", str(workdir / "config.json")])
    assert code == 0
    printed = capsys.readouterr().out
    assert json.loads(printed)["command"] == "galois"


def test_parse_point():
    point = parse_point("x=1/2; y=root(z^2 - 2, 1)")
    assert point["x"].rational_value == 0.5
    assert not point["y"].is_rational
