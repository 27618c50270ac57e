#!/usr/bin/env python3
"""
CURVE-QE - Tests des racines isolées et des sommes de sous-ensembles
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from core.algebraic import alg_sum  # noqa: E402
from core.errors import CertificateError  # noqa: E402
from core.theta import (  # noqa: E402
    ConfigEntry,
    ConfigTuple,
    SubsetSumIndex,
    ThetaContext,
    entries_equal,
    subset_mask,
    subset_sum_injective,
)


def test_context_errors():
    with pytest.raises(CertificateError):
        ThetaContext(1, 1)
    with pytest.raises(CertificateError):
        ThetaContext(4, 1, family="sextic")
    with pytest.raises(CertificateError):
        ThetaContext(5, 1, family="quartic")
    # a0 = 0 : racine multiple en 0
    with pytest.raises(CertificateError):
        ThetaContext.theta(4, 0)


def test_theta_context_roots():
    ctx = ThetaContext.theta(4, 1)
    assert len(ctx.roots) == 4
    assert ctx.separation > 0
    total = ctx.exact_sum(range(4))
    assert total.is_rational and total.rational_value == -1
    data = ctx.to_dict()
    assert data["family"] == "theta" and len(data["roots"]) == 4


def test_quartic_context_vieta():
    ctx = ThetaContext.quartic(Fraction(5, 7))
    assert ctx.vieta_sum == 0
    assert ctx.exact_sum(range(4)).rational_value == 0


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_subset_sums_injective_for_a_equals_one(k):
    ctx = ThetaContext.theta(4, 1)
    result = subset_sum_injective(ctx, k)
    assert result.injective
    assert result.collisions == []
    if k < 4:
        assert result.min_separation is not None and result.min_separation > 0
    assert result.to_dict()["k"] == k


def test_subset_sum_k_out_of_range():
    ctx = ThetaContext.theta(4, 1)
    with pytest.raises(CertificateError):
        subset_sum_injective(ctx, 0)
    with pytest.raises(CertificateError):
        subset_sum_injective(ctx, 5)


def test_entries_equal():
    ctx = ThetaContext.theta(4, 1)
    assert entries_equal(ctx, ConfigEntry((0, 1)), ConfigEntry((0, 1)))
    assert not entries_equal(ctx, ConfigEntry((0, 1)), ConfigEntry((0, 1), Fraction(1)))
    assert not entries_equal(ctx, ConfigEntry((0, 1)), ConfigEntry((2, 3)))


def test_subset_sum_index_matching():
    ctx = ThetaContext.theta(4, 1)
    index = SubsetSumIndex(ctx, 2)
    assert index.matching(ConfigEntry((1, 3))) == [(1, 3)]
    assert index.matching(ConfigEntry((1, 3), Fraction(1, 3))) == []


def test_config_tuple_helpers():
    ctx = ThetaContext.theta(4, 1)
    config = ConfigTuple.from_subsets(ctx, [(1, 0), (2, 3)], "demo")
    assert config.entries[0].subset == (0, 1)
    shifted = config.shifted(1, 2)
    assert shifted.entries[1].shift == 2
    assert shifted.provenance["shifted"] == 2
    assert config.permuted([1, 0]).entries[0].subset == (2, 3)
    assert subset_mask((0, 2)) == 0b101
    assert config.to_dict()["entries"][1] == {"subset": [3, 4], "shift": "0"}


def test_escalation_ceiling_follows_context():
    ctx = ThetaContext.theta(4, 1)
    assert ctx.escalation_ceiling() == 4 * 128
    assert ctx.escalation_ceiling(200) == 200
    narrow = ThetaContext.theta(4, 1, precision_bits=128, escalation_factor=1)
    assert narrow.escalation_ceiling() == 128
    assert subset_sum_injective(narrow, 2).injective


def test_exact_sums_stay_minimal():
    ctx = ThetaContext.theta(4, 1)
    three = ctx.exact_sum([0, 1, 2])
    assert three.degree == 4
    assert alg_sum(three, ctx.roots[3]).rational_value == -1
