#!/usr/bin/env python3
"""
CURVE-QE - Tests des certificats de Galois
"""

import json
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from core.algebra import parse_poly, to_poly  # noqa: E402
from core.errors import CertificateError  # noqa: E402
from core.galois_lab import (  # noqa: E402
    FAIL,
    PASS,
    A,
    X,
    disc_nonsquare_check,
    quartic_irreducible_over_q,
    s4_at_rational,
    s4_audit,
    s4_over_function_field,
)


def test_function_field_certificate():
    cert = s4_over_function_field()
    assert cert.valid
    assert cert.status == PASS
    disc = parse_poly(cert.discriminant, [A]).as_expr()
    assert (disc - (256 * A**3 - 27)).expand() == 0
    data = json.loads(cert.to_json())
    assert data["context"] == "function-field"
    assert all(data[k]["status"] == PASS for k in ("quartic_irreducible", "resolvent_irreducible", "disc_nonsquare"))


def test_function_field_precondition():
    with pytest.raises(CertificateError):
        s4_over_function_field(to_poly(X**4 + X + A**2, X, A))


def test_rational_a_equals_one():
    cert = s4_at_rational(1)
    assert cert.valid
    assert cert.discriminant == "229"
    assert cert.cross_checks and cert.cross_checks[0].passed


def test_rational_reducible_quartic():
    # X = 1 racine de X^4 + X - 2
    cert = s4_at_rational(-2)
    assert not cert.valid
    assert cert.quartic_irreducible.status == FAIL
    assert cert.cross_checks == []


def test_rational_resolvent_with_rational_root():
    # X = 2 racine de X^3 - 4 a X - 1 pour a = 7/8
    cert = s4_at_rational(Fraction(7, 8))
    assert cert.resolvent_irreducible.status == FAIL
    assert not cert.valid


def test_mod_p_shortcut_agrees_with_search():
    p = to_poly(X**4 + X + 1, X)
    fast = quartic_irreducible_over_q(p, use_mod_p=True)
    slow = quartic_irreducible_over_q(p, use_mod_p=False)
    assert fast.passed and slow.passed
    assert fast.outputs.get("irreducible_mod") == 2
    reducible = to_poly((X**2 + X + 2) * (X**2 - X + 3), X)
    assert not quartic_irreducible_over_q(reducible, use_mod_p=True).passed


def test_disc_nonsquare_check():
    assert disc_nonsquare_check(Fraction(0)).status == FAIL
    assert disc_nonsquare_check(Fraction(229)).status == PASS
    assert disc_nonsquare_check(Fraction(9, 4)).status == FAIL
    assert disc_nonsquare_check(Fraction(-4)).status == PASS


def test_discriminant_never_vanishes_at_rational_points():
    # 256 a^3 = 27 n'a pas de solution rationnelle
    cert = s4_at_rational(Fraction(27, 256))
    assert cert.discriminant != "0"
    assert cert.disc_nonsquare.outputs["zero"] is False


def test_audit_is_reproducible():
    first = s4_audit(n=12, seed=4)
    second = s4_audit(n=12, seed=4)
    assert first == second
    assert first["samples"] == 12
    assert first["passed"] + len(first["failures"]) == 12
    assert 0.0 <= first["rate"] <= 1.0
