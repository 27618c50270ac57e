#!/usr/bin/env python3
"""
CURVE-QE - Tests du noyau polynomial exact
"""

import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from sympy import Symbol

sys.path.insert(0, str(Path(__file__).parent))

from core.algebra import (  # noqa: E402
    Z,
    discriminant,
    format_poly,
    integer_quadratic_factor,
    isolate_roots,
    linear_in_a_irreducible,
    parse_poly,
    perfect_square_test,
    rational_roots,
    resolvent_cubic,
    resultant,
    specialize,
    theta_discriminant,
    theta_polynomial,
    to_poly,
)
from core.curves import random_rational  # noqa: E402
from core.errors import AlgebraError  # noqa: E402

x, y, a = Symbol("x"), Symbol("y"), Symbol("a")
X = Symbol("X")


def test_parse_and_format():
    p = parse_poly("x1 - x0^2", [Symbol("x0"), Symbol("x1")])
    assert p.total_degree() == 2
    assert "^" in format_poly(p)


def test_parse_rejects_unknown_symbol():
    with pytest.raises(AlgebraError):
        parse_poly("x0 + t", [Symbol("x0")])


def test_resultant_of_line_and_parabola():
    p = to_poly(y - x**2, x, y)
    q = to_poly(y - 1, x, y)
    res = resultant(p, q, y)
    assert res.as_expr().expand() == (1 - x**2).expand() or res.as_expr().expand() == (x**2 - 1).expand()


def test_resultant_requires_positive_degree():
    with pytest.raises(AlgebraError):
        resultant(to_poly(x + 1, x, y), to_poly(y - 1, x, y), y)


def test_resultant_specialization():
    """Res_y(p, q)(x0) = Res_y(p(x0), q(x0)) quand les degrés dominants ne s'annulent pas"""
    rng = np.random.default_rng(11)
    failures = 0
    for _ in range(50):
        c = [random_rational(rng) for _ in range(6)]
        p = to_poly(y**2 + c[0] * x * y + c[1] * x + c[2], x, y)
        q = to_poly(y**3 + c[3] * x**2 + c[4] * y + c[5], x, y)
        x0 = random_rational(rng)
        general = specialize(resultant(p, q, y), {x: x0})
        special = resultant(specialize(p, {x: x0}), specialize(q, {x: x0}), y)
        if general.as_expr() != special.as_expr():
            failures += 1
    assert failures == 0


def test_discriminant_of_quartic_family():
    quartic = to_poly(X**4 + X + a, X, a)
    disc = discriminant(quartic, X)
    assert disc.as_expr().expand() == (256 * a**3 - 27).expand()


def test_perfect_square_test():
    assert perfect_square_test(to_poly((a**2 + 1) ** 2 * 4, a))
    assert not perfect_square_test(to_poly(256 * a**3 - 27, a))
    assert not perfect_square_test(to_poly(-(a**2), a))


def test_linear_in_a_irreducible():
    assert linear_in_a_irreducible(to_poly(X**4 + X + a, X, a), a)
    assert linear_in_a_irreducible(to_poly(X**3 - 4 * a * X - 1, X, a), a)
    assert not linear_in_a_irreducible(to_poly((X - 1) * (a + X), X, a), a)
    with pytest.raises(AlgebraError):
        linear_in_a_irreducible(to_poly(X + a**2, X, a), a)


def test_rational_roots():
    p = to_poly((X - Fraction(1, 2)) * (X + 3) * (X**2 + 1), X)
    assert rational_roots(p) == [Fraction(-3), Fraction(1, 2)]
    assert rational_roots(to_poly(X**3 - X, X)) == [Fraction(-1), Fraction(0), Fraction(1)]


def test_integer_quadratic_factor():
    p = to_poly((X**2 + X + 2) * (X**2 - 3), X)
    found = integer_quadratic_factor(p)
    assert found is not None
    g, h = found
    assert (g.as_expr() * h.as_expr()).expand() == p.as_expr().expand()
    assert integer_quadratic_factor(to_poly(X**4 + X + 1, X)) is None


def test_resolvent_cubic_matches_known_form():
    quartic = to_poly(X**4 + X + a, X, a)
    cubic = resolvent_cubic(quartic, X)
    assert cubic.as_expr().expand() == (X**3 - 4 * a * X - 1).expand()


def test_resolvent_cubic_requires_depressed_quartic():
    with pytest.raises(AlgebraError):
        resolvent_cubic(to_poly(X**4 + X**3 + a, X, a), X)


def test_theta_polynomial_and_discriminant():
    p = theta_polynomial(4, Z, a)
    assert p.as_expr() == Z**4 + Z**3 + a
    disc = theta_discriminant(4, a)
    # racine double quand a annule le discriminant
    assert specialize(disc, {a: Fraction(0)}).as_expr() == 0
    assert specialize(disc, {a: Fraction(1)}).as_expr() != 0


def test_isolate_roots_squarefree_part():
    balls = isolate_roots(to_poly((Z - 1) ** 2 * (Z + 2), Z))
    assert len(balls) == 2
    assert balls[0].contains_point(-2)
    assert balls[1].contains_point(1)


def test_isolate_zero_polynomial_raises():
    with pytest.raises(AlgebraError):
        isolate_roots(to_poly(0, Z))
