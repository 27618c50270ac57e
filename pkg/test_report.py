#!/usr/bin/env python3
"""
CURVE-QE - Tests des rapports
"""

import json
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from core.errors import CertificateError  # noqa: E402
from core.report import CheckResult, Report, emit_report, render_report, strip_timing  # noqa: E402


def make_report(duration):
    report = Report("demo", {"seed": 1})
    report.add(CheckResult("a", True, {"value": Fraction(1, 3), "set": {3, 1}}, duration))
    report.add(CheckResult("b", True, {"rows": (1, 2)}, duration * 2))
    report.notes.append("remarque")
    return report


def test_empty_report_passes():
    report = Report("vide")
    assert report.passed
    assert report.to_dict()["status"] == "pass"


def test_failing_check_fails_report():
    report = make_report(1.0)
    report.add(CheckResult.from_error("c", CertificateError("pas de certificat")))
    data = report.to_dict()
    assert data["status"] == "fail"
    assert data["checks"][-1]["error"] == {"type": "CertificateError", "message": "pas de certificat"}


def test_deterministic_modulo_timing():
    first = json.loads(render_report(make_report(1.0)))
    second = json.loads(render_report(make_report(7.5)))
    assert first != second
    assert strip_timing(first) == strip_timing(second)
    assert first["checks"][0]["details"] == {"value": "1/3", "set": [1, 3]}
    assert first["timing"]["total_ms"] == 3.0


def test_markdown_rendering():
    report = make_report(1.0)
    report.add(CheckResult.from_error("c", CertificateError("boum")))
    text = render_report(report, "markdown")
    assert text.startswith("# curveqe")
    assert "| a | pass |" in text
    assert "## Remarques" in text
    assert "c: CertificateError: boum" in text


def test_emit_report_writes_file(tmp_path):
    target = tmp_path / "sub" / "report.json"
    text = emit_report(make_report(1.0), target)
    assert target.read_text(encoding="utf-8") == text
    assert json.loads(text)["tool"] == "curveqe"


def test_extend_merges_notes():
    first = make_report(1.0)
    second = make_report(2.0)
    second.notes.append("autre")
    first.extend(second)
    assert len(first.checks) == 4
    assert first.notes == ["remarque", "autre"]
