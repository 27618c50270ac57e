#!/usr/bin/env python3
"""
CURVE-QE - Tests des contre-exemples (triangle/étoile, structures S', T')
"""

import sys
from pathlib import Path

import pytest
from sympy import expand

sys.path.insert(0, str(Path(__file__).parent))

from core.algebraic import alg_equal  # noqa: E402
from core.counterexamples import (  # noqa: E402
    S,
    Y,
    binarization_check,
    build_sum_tuples,
    check_T,
    claim_B_check,
    lambda_witness_check,
    lambda_witness_suite,
    pair_conjugacy_witnesses,
    r_locus_core,
    r_locus_poly,
    relabeled_stars,
    triangle_star_configs,
)
from core.errors import CertificateError  # noqa: E402
from core.theta import ThetaContext  # noqa: E402


@pytest.fixture(scope="module")
def quartic():
    return ThetaContext.quartic(1)


@pytest.fixture(scope="module")
def theta4():
    return ThetaContext.theta(4, 1)


def test_r_locus_core():
    assert expand(r_locus_core().as_expr() - (2 * S * Y**2 - 2 * S**2 * Y + S**3 + 1)) == 0
    full = r_locus_poly(S).as_expr()
    assert expand(full - (-2) * (Y - S / 2) * r_locus_core().as_expr()) == 0


def test_triangle_holds_with_fourth_root(quartic):
    triangle, _ = triangle_star_configs(quartic)
    result = check_T(triangle)
    assert result.holds
    assert alg_equal(result.witness, quartic.roots[3])


def test_star_fails_in_every_order(quartic):
    _, star = triangle_star_configs(quartic)
    result = check_T(star)
    assert not result.holds
    for relabeled in relabeled_stars(star):
        assert not check_T(relabeled).holds


def test_triangle_star_requires_quartic(theta4):
    with pytest.raises(CertificateError):
        triangle_star_configs(theta4)


def test_pairs_are_conjugate(quartic):
    triangle, star = triangle_star_configs(quartic)
    witnesses = pair_conjugacy_witnesses(triangle, star)
    assert len(witnesses) == 36
    assert all(sorted(w["permutation"]) == [1, 2, 3, 4] for w in witnesses)


def test_check_T_arity(quartic):
    triangle, _ = triangle_star_configs(quartic)
    with pytest.raises(CertificateError):
        check_T(triangle.permuted([0, 1]))


def test_sum_tuples(theta4):
    s, t = build_sum_tuples(3, theta4)
    assert len(s) == 3 and len(t) == 3
    assert all(len(e.subset) == 2 for e in s.entries + t.entries)
    with pytest.raises(CertificateError):
        build_sum_tuples(4, theta4)


@pytest.mark.parametrize("n", [2, 3])
def test_lambda_witnesses(n):
    result = lambda_witness_suite(n, all_pairs=True)
    assert result.passed
    assert result.details["failures"] == []


def test_lambda_rejects_bad_injection():
    with pytest.raises(CertificateError):
        lambda_witness_check(3, [0, 0], [0, 1])


def test_claim_B_for_three_predicates(theta4):
    result = claim_B_check(3, theta4)
    assert result.passed, result.details
    assert result.details["matching_psi"] == 0
    assert result.details["candidates_checked"] == 24
    assert result.details["t_prime_satisfiable"]
    assert result.details["rerun_agrees"]


def test_binarization_for_three_predicates(theta4):
    result = binarization_check(3, theta4)
    assert result.passed, result.details["mismatches"][:2]
    assert result.details["negatives"] >= 20
    assert result.details["mismatches"] == []


def test_binarization_rejects_wrong_context(quartic):
    with pytest.raises(CertificateError):
        binarization_check(4, quartic)
