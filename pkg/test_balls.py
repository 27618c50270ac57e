#!/usr/bin/env python3
"""
CURVE-QE - Tests de l'arithmétique de boules et de l'isolation des racines
"""

import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from core.balls import (  # noqa: E402
    ComplexBall,
    horner,
    isolate_ball_poly,
    isolate_poly_coeffs,
    sort_roots,
    sqrt_lower,
    sqrt_upper,
)
from core.curves import random_rational  # noqa: E402
from core.errors import AlgebraError  # noqa: E402


def _value(coeffs, x):
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def test_exact_arithmetic():
    a = ComplexBall.exact(1, 2)
    b = ComplexBall.exact(3, -1)
    assert a + b == ComplexBall.exact(4, 1)
    assert a * b == ComplexBall.exact(5, 5)
    assert (a ** 2) == a * a
    assert a.scale(Fraction(-2)) == ComplexBall.exact(-2, -4)


def test_overlap_and_gap():
    a = ComplexBall(Fraction(0), Fraction(0), Fraction(1))
    b = ComplexBall(Fraction(3), Fraction(0), Fraction(1))
    assert not a.overlaps(b)
    assert a.gap_lower(b) > 0
    c = ComplexBall(Fraction(3, 2), Fraction(0), Fraction(1))
    assert a.overlaps(c)
    assert a.gap_lower(c) < 0


def test_contains_point_and_ball():
    a = ComplexBall(Fraction(1), Fraction(1), Fraction(1, 2))
    assert a.contains_point(Fraction(1), Fraction(3, 2))
    assert not a.contains_point(2, 2)
    assert a.contains(ComplexBall(Fraction(1), Fraction(1), Fraction(1, 4)))
    assert not a.contains(ComplexBall(Fraction(2), Fraction(1), Fraction(1, 4)))


def test_from_rational_encloses_value():
    q = Fraction(1, 3)
    ball = ComplexBall.from_rational(q, bits=40)
    assert ball.contains_point(q)
    assert ball.rad <= Fraction(1, 1 << 39)


def test_horner_enclosure_soundness():
    """1000 évaluations rationnelles aléatoires : la valeur exacte est dans la boule"""
    rng = np.random.default_rng(7)
    for _ in range(1000):
        coeffs = [random_rational(rng) for _ in range(int(rng.integers(1, 6)))]
        x = random_rational(rng)
        ball = horner(coeffs, ComplexBall.from_rational(x, bits=48), 48)
        assert ball.contains_point(_value(coeffs, x))


def test_isolate_linear_and_constant():
    assert isolate_poly_coeffs([Fraction(5)]) == []
    assert isolate_poly_coeffs([Fraction(2), Fraction(-1)]) == [ComplexBall(Fraction(1, 2))]


def test_isolate_quadratic_sqrt2():
    balls = isolate_poly_coeffs([1, 0, -2], precision_bits=64)
    assert len(balls) == 2
    assert balls[0].re < 0 < balls[1].re
    for b in balls:
        assert b.rad <= Fraction(1, 1 << 64)
        assert abs(b.re * b.re - 2) < Fraction(1, 1 << 60)


def test_abs_bounds_keep_relative_precision_on_tiny_values():
    tiny = Fraction(1, 1 << 150)
    ball = ComplexBall(tiny)
    assert tiny <= ball.abs_upper() <= tiny * (1 + Fraction(1, 1 << 60))
    assert tiny * (1 - Fraction(1, 1 << 60)) <= ball.abs_lower() <= tiny
    assert sqrt_upper(Fraction(9, 1 << 300)) == Fraction(3, 1 << 150)
    assert sqrt_lower(Fraction(9, 1 << 300)) == Fraction(3, 1 << 150)


@pytest.mark.parametrize("bits", [128, 256])
def test_isolate_irrational_roots_at_working_precision(bits):
    balls = isolate_poly_coeffs([1, 0, -2], precision_bits=bits)
    assert len(balls) == 2
    for b in balls:
        assert b.rad <= Fraction(1, 1 << bits)
    quartic = isolate_poly_coeffs([1, 0, 0, 1, 1], precision_bits=bits)
    assert len(quartic) == 4
    assert all(b.rad <= Fraction(1, 1 << bits) for b in quartic)


def test_isolate_conjugate_pair_sorted_by_imaginary_part():
    balls = isolate_poly_coeffs([1, 0, 1])
    assert balls[0].im < 0 < balls[1].im


@pytest.mark.parametrize("degree", [2, 3, 5, 8])
def test_isolation_reconstructs_coefficients(degree):
    """Le produit des (z - boule) redonne les coefficients, aux rayons près"""
    rng = np.random.default_rng(degree)
    roots = sorted({Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 4))) for _ in range(degree)})
    coeffs = [Fraction(1)]
    for r in roots:
        coeffs = [a - r * b for a, b in zip(coeffs + [Fraction(0)], [Fraction(0)] + coeffs)]
    balls = isolate_poly_coeffs(coeffs, precision_bits=96)
    assert len(balls) == len(roots)
    product = [ComplexBall(Fraction(1))]
    for b in balls:
        shifted = product + [ComplexBall(Fraction(0))]
        scaled = [ComplexBall(Fraction(0))] + [p * b for p in product]
        product = [s - t for s, t in zip(shifted, scaled)]
    for ball, c in zip(product, coeffs):
        assert ball.contains_point(c) or abs(ball.re - c) < Fraction(1, 1 << 40)


def test_isolated_balls_are_disjoint():
    balls = isolate_poly_coeffs([1, 1, 0, 0, 1])
    for i in range(len(balls)):
        for j in range(i + 1, len(balls)):
            assert not balls[i].overlaps(balls[j])


def test_sort_roots_lexicographic():
    balls = [ComplexBall.exact(1, 0), ComplexBall.exact(-1, 2), ComplexBall.exact(-1, -2)]
    ordered = sort_roots(balls)
    assert ordered == [ComplexBall.exact(-1, -2), ComplexBall.exact(-1, 2), ComplexBall.exact(1, 0)]


def test_isolate_ball_poly_matches_exact_isolation():
    exact = isolate_poly_coeffs([1, 0, -3, 1], precision_bits=64)
    approx = isolate_ball_poly(lambda bits: [ComplexBall.from_rational(c, bits) for c in (1, 0, -3, 1)], 64)
    assert len(approx) == 3
    for a, b in zip(exact, approx):
        assert a.overlaps(b)


def test_isolate_ball_poly_rejects_vanishing_leading_coefficient():
    with pytest.raises(AlgebraError):
        isolate_ball_poly(lambda bits: [ComplexBall(Fraction(0), Fraction(0), Fraction(1)), ComplexBall(Fraction(1))])
