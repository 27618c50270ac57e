#!/usr/bin/env python3
"""
CURVE-QE - Tests de la sémantique exacte et de l'échantillonnage
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from core.algebraic import AlgebraicNumber  # noqa: E402
from core.curves import INFINITE  # noqa: E402
from core.oracle import CurveOracle  # noqa: E402
from core.parser import parse  # noqa: E402
from core.semantics import Evaluator, check_equivalence_sampled, evaluate, sample_assignments  # noqa: E402

CORPUS = Path(__file__).parent / "corpus"


@pytest.fixture
def oracle():
    return CurveOracle.from_json(CORPUS / "signature.json")


def pt(**values):
    return {k: AlgebraicNumber.from_text(v) for k, v in values.items()}


def test_atoms_at_points(oracle):
    f = parse("(and (Parab x y) (not (Circ x y)))", oracle.signature)
    assert evaluate(f, pt(x="2", y="4"), oracle)
    assert not evaluate(f, pt(x="2", y="3"), oracle)


def test_exists_over_circle(oracle):
    """Sur C, chaque x a une fibre non vide : y = ±sqrt(1 - x^2)"""
    f = parse("(exists y (Circ x y))", oracle.signature)
    for x in ("1/2", "1", "2", "-7/3", "root(z^2 + 1, 1)"):
        assert evaluate(f, pt(x=x), oracle)
    ev = Evaluator(oracle)
    two = parse("(countGE 2 y (Circ x y))", oracle.signature)
    assert ev.evaluate(two, pt(x="2"))
    assert not ev.evaluate(two, pt(x="-1"))


def test_counting_quantifiers(oracle):
    ev = Evaluator(oracle)
    two = parse("(countGE 2 y (Circ x y))", oracle.signature)
    assert ev.evaluate(two, pt(x="0"))
    assert not ev.evaluate(two, pt(x="1"))
    exactly = parse("(countEQ 2 y (Sq x y))", oracle.signature)
    assert ev.evaluate(exactly, pt(x="4"))
    assert not ev.evaluate(exactly, pt(x="0"))


def test_infinite_fiber(oracle):
    ev = Evaluator(oracle)
    body = parse("(Vert x y)", oracle.signature)
    assert ev.count("y", body, pt(x="1")) == INFINITE
    assert ev.count("y", body, pt(x="2")) == 0
    f = parse("(countINF y (not (Parab x y)))", oracle.signature)
    assert ev.evaluate(f, pt(x="3"))


def test_equals_constant(oracle):
    f = parse("(= x sqrt2)", oracle.signature)
    assert evaluate(f, pt(x="root(z^2 - 2, 1)"), oracle)
    assert not evaluate(f, pt(x="root(z^2 - 2, 0)"), oracle)


def test_punctured_relation(oracle):
    f = parse("(PuncParab x y)", oracle.signature)
    assert not evaluate(f, pt(x="1", y="1"), oracle)
    assert evaluate(f, pt(x="2", y="4"), oracle)


def test_sample_assignments_deterministic(oracle):
    f = parse("(exists y (and (Parab x y) (Circ x y)))", oracle.signature)
    first = sample_assignments([f], oracle, 40, seed=9)
    second = sample_assignments([f], oracle, 40, seed=9)
    assert len(first) >= 40
    assert [(s, {k: v.to_text() for k, v in p.items()}) for s, p in first] == [
        (s, {k: v.to_text() for k, v in p.items()}) for s, p in second
    ]
    assert {s for s, _ in first} >= {"random"}


def test_sample_closed_formula(oracle):
    f = parse("(exists x (exists y (Parab x y)))", oracle.signature)
    assert sample_assignments([f], oracle, 10, seed=1) == [("closed", {})]


def test_equivalence_of_equivalent_pair(oracle):
    f = parse("(exists y (and (Circ x y) (= y c0)))", oracle.signature)
    g = parse("(exists y (and (= y c0) (Circ x y)))", oracle.signature)
    report = check_equivalence_sampled(f, g, oracle, n=50, seed=3)
    assert report.agree
    assert report.points_checked >= 50
    assert report.to_dict()["agree"] is True


def test_equivalence_finds_disagreement(oracle):
    # toujours vrai contre vrai sur les seules racines de x^4 + x^2 - 1
    f = parse("(exists y (Circ x y))", oracle.signature)
    g = parse("(exists y (and (Circ x y) (Parab x y)))", oracle.signature)
    report = check_equivalence_sampled(f, g, oracle, n=50, seed=3)
    assert not report.agree
    witness = report.disagreements[0]
    assert {"x", "source", "left", "right"} <= set(witness)
    assert (witness["left"], witness["right"]) == ("True", "False")


def test_equivalence_stop_at_first(oracle):
    f = parse("(Circ x y)", oracle.signature)
    g = parse("(not (Circ x y))", oracle.signature)
    report = check_equivalence_sampled(f, g, oracle, n=30, seed=3, stop_at_first=True)
    assert len(report.disagreements) == 1
    assert report.points_checked == 1
