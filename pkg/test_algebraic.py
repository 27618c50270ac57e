#!/usr/bin/env python3
"""
CURVE-QE - Tests des nombres algébriques exacts
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from sympy import Symbol

sys.path.insert(0, str(Path(__file__).parent))

from core.algebra import Z, to_poly  # noqa: E402
from core.algebraic import (  # noqa: E402
    AlgebraicNumber,
    alg_equal,
    alg_neg,
    alg_scale,
    alg_sum,
    distinct,
    specialized_roots,
    vanishes_at,
)
from core.errors import AlgebraError  # noqa: E402

x, y = Symbol("x"), Symbol("y")
SQRT2 = "root(z^2 - 2, 1)"


def test_from_text_rational_and_root():
    half = AlgebraicNumber.from_text("1/2")
    assert half.is_rational and half.rational_value == Fraction(1, 2)
    r = AlgebraicNumber.from_text(SQRT2)
    assert not r.is_rational
    assert abs(r.approx() - 2 ** 0.5) < 1e-12


def test_from_text_rejects_garbage():
    with pytest.raises(AlgebraError):
        AlgebraicNumber.from_text("pas un nombre")
    with pytest.raises(AlgebraError):
        AlgebraicNumber.from_text("root(z^2 - 2, 5)")


def test_to_text_round_trip_index():
    r = AlgebraicNumber.from_text("root(z^3 + 2, 2)")
    assert alg_equal(AlgebraicNumber.from_text(r.to_text()), r)


def test_equality_across_polynomials():
    r = AlgebraicNumber.from_text(SQRT2)
    # sqrt(2) racine de z^4 - 4 aussi
    s = AlgebraicNumber.from_text("root(z^4 - 4, 3)")
    assert s.approx().real > 1
    assert alg_equal(r, s)
    assert not alg_equal(r, alg_neg(r))


def test_sum_of_conjugates_is_rational():
    r = AlgebraicNumber.from_text(SQRT2)
    total = alg_sum(r, alg_neg(r))
    assert total.is_rational and total.rational_value == 0


def test_sum_with_rational_shift():
    r = AlgebraicNumber.from_text(SQRT2)
    shifted = alg_sum(r, AlgebraicNumber.rational(1))
    assert abs(shifted.approx() - (1 + 2 ** 0.5)) < 1e-12
    assert shifted.degree == 2


def test_sum_of_two_irrationals():
    r2 = AlgebraicNumber.from_text(SQRT2)
    r3 = AlgebraicNumber.from_text("root(z^2 - 3, 1)")
    total = alg_sum(r2, r3)
    assert abs(total.approx() - (2 ** 0.5 + 3 ** 0.5)) < 1e-12
    assert total.degree == 4
    assert total.minimal() is total


def test_scale():
    r = AlgebraicNumber.from_text(SQRT2)
    half = alg_scale(r, Fraction(1, 2))
    assert abs(half.approx() - 2 ** 0.5 / 2) < 1e-12
    assert alg_scale(r, 0).rational_value == 0


def test_vanishes_at_exact_zero():
    r = AlgebraicNumber.from_text(SQRT2)
    p = to_poly(x**2 - 2, x)
    assert vanishes_at(p, {x: r})
    q = to_poly(x**2 - 2 + y, x, y)
    assert not vanishes_at(q, {x: r, y: AlgebraicNumber.rational(Fraction(1, 10**12))})
    assert vanishes_at(q, {x: r, y: AlgebraicNumber.rational(0)})


def test_vanishes_at_two_algebraic_coordinates():
    r2 = AlgebraicNumber.from_text(SQRT2)
    r8 = AlgebraicNumber.from_text("root(z^2 - 8, 1)")
    p = to_poly(2 * x - y, x, y)
    assert vanishes_at(p, {x: r2, y: r8})
    assert not vanishes_at(to_poly(x - y, x, y), {x: r2, y: r8})


def test_specialized_roots():
    r = AlgebraicNumber.from_text(SQRT2)
    roots = specialized_roots(to_poly(y**2 - x, x, y), y, {x: r})
    assert roots is not None
    assert len(distinct(roots)) == 2
    assert all(vanishes_at(to_poly(y**2 - x, x, y), {x: r, y: v}) for v in roots)


def test_specialized_roots_identically_zero():
    assert specialized_roots(to_poly(x * y, x, y), y, {x: AlgebraicNumber.rational(0)}) is None


def test_roots_of_are_sorted():
    roots = AlgebraicNumber.roots_of(to_poly(Z**2 - 2, Z))
    assert roots[0].approx().real < 0 < roots[1].approx().real


def test_roots_of_splits_rational_roots():
    roots = AlgebraicNumber.roots_of(to_poly(Z**3 - 2 * Z, Z))
    assert [r.is_rational for r in roots] == [False, True, False]
    assert roots[1].rational_value == 0
    assert all(r.degree == 2 for r in (roots[0], roots[2]))
    fiber = AlgebraicNumber.roots_of(to_poly((Z**2 - 1) * (3 * Z - 1), Z))
    assert [r.rational_value for r in fiber] == [-1, Fraction(1, 3), 1]


def test_from_text_keeps_irreducible_factor():
    s = AlgebraicNumber.from_text("root(z^4 - 4, 3)")
    assert s.degree == 2
    assert s.to_text() == "root(z^2 - 2, 1)"


def test_sums_reduce_to_minimal_polynomial():
    r = AlgebraicNumber.from_text(SQRT2)
    doubled = alg_sum(r, r)
    assert doubled.degree == 2
    assert alg_equal(doubled, AlgebraicNumber.from_text("root(z^2 - 8, 1)"))
    cube = AlgebraicNumber.from_text("root(z^3 - 2, 2)")
    assert alg_sum(cube, alg_neg(cube)).rational_value == 0
