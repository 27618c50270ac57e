#!/usr/bin/env python3
"""
CURVE-QE - Tests des structures à prédicats unaires
"""

import sys
from itertools import combinations
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from core.errors import CertificateError, SearchRefusedError  # noqa: E402
from core.structures import (  # noqa: E402
    LStructure,
    build_X,
    build_Y,
    find_reduct_iso,
    full_iso_certificate,
    is_isomorphism,
    is_symmetric,
    permutation_count,
    phi,
    search_iso,
    subset_text,
    toggle_map,
)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_sizes(n):
    assert len(build_X(n)) == 2 ** (n - 1)
    assert len(build_Y(n)) == 2 ** (n - 1)


def test_small_n_rejected():
    with pytest.raises(CertificateError):
        build_X(1)


def test_invalid_structure():
    with pytest.raises(CertificateError):
        LStructure(1, (0, 1), (frozenset({2}),))
    with pytest.raises(CertificateError):
        LStructure(2, (0, 1), (frozenset({0}),))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_symmetry(n):
    for s in (build_X(n), build_Y(n)):
        report = is_symmetric(s)
        assert report.symmetric
        assert report.failures == []
        assert report.induced == len(report.witnesses)


def test_phi_is_an_involution_onto_even_subsets():
    n = 4
    f = phi(n)
    x, y = build_X(n), build_Y(n)
    assert sorted(f) == sorted(x.universe)
    assert sorted(f.values()) == sorted(y.universe)
    top = 1 << (n - 1)
    assert all(f[alpha] == alpha ^ top for alpha in f)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_reducts_are_isomorphic(n):
    x, y = build_X(n), build_Y(n)
    for keep in combinations(range(n), n - 1):
        f = find_reduct_iso(x, y, keep)
        assert f is not None
        assert is_isomorphism(x, y, f, keep)
    assert find_reduct_iso(x, y, range(n - 1)) == phi(n)


def test_toggle_map_for_each_dropped_index():
    n = 4
    x, y = build_X(n), build_Y(n)
    for j in range(n):
        keep = [i for i in range(n) if i != j]
        assert is_isomorphism(x, y, toggle_map(n, j), keep)
        assert not is_isomorphism(x, y, toggle_map(n, j))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_full_structures_not_isomorphic(n):
    cert = full_iso_certificate(build_X(n), build_Y(n))
    assert cert.status == "NONISO"
    assert cert.exhaustive_count == 0
    assert cert.bijection is None


def test_full_certificate_large_n_uses_intersections():
    cert = full_iso_certificate(build_X(5), build_Y(5))
    assert cert.status == "NONISO"
    assert cert.intersections is not None
    assert cert.exhaustive_count is None


def test_iso_certificate_on_relabelled_structure():
    s = LStructure(1, (0, 1), (frozenset({0}),), "S")
    t = LStructure(1, (5, 6), (frozenset({6}),), "T")
    cert = full_iso_certificate(s, t)
    assert cert.status == "ISO"
    assert cert.bijection == {0: 6, 1: 5}
    assert cert.exhaustive_count == 1
    assert permutation_count(s, t) == 1


def test_search_refused_above_limit():
    with pytest.raises(SearchRefusedError):
        search_iso(build_X(5), build_Y(5))
    with pytest.raises(SearchRefusedError):
        permutation_count(build_X(5), build_Y(5))


def test_subset_text():
    assert subset_text(0) == "{}"
    assert subset_text(0b101) == "{1,3}"
