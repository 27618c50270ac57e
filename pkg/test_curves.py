#!/usr/bin/env python3
"""
CURVE-QE - Tests de la géométrie des courbes
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from core.algebra import to_poly  # noqa: E402
from core.algebraic import AlgebraicNumber, alg_equal  # noqa: E402
from core.curves import (  # noqa: E402
    FIBER,
    PARAM,
    CurveSet,
    FiberConjunct,
    count_projection,
    eliminate_variable,
    fiber_count_at,
    split_contents,
)
from core.errors import OracleError, SamplingError  # noqa: E402


def q(text):
    return AlgebraicNumber.from_text(text)


def plane(poly, minus=()):
    return CurveSet.from_dict({"kind": "plane", "arity": 2, "polys": [poly], "minus": [list(p) for p in minus]})


def test_plane_membership():
    parab = plane("x1 - x0^2")
    assert parab.contains((q("2"), q("4")))
    assert not parab.contains((q("2"), q("5")))
    assert parab.contains((q("root(z^2 - 2, 1)"), q("2")))


def test_punctured_plane_membership():
    punc = plane("x1 - x0^2", minus=[("1", "1")])
    assert not punc.contains((q("1"), q("1")))
    assert punc.contains((q("-1"), q("1")))


def test_points_kind():
    pts = CurveSet.from_dict({"kind": "points", "arity": 2, "points": [["0", "0"], ["1", "-1"]]})
    assert pts.contains((q("1"), q("-1")))
    assert not pts.contains((q("1"), q("1")))
    assert pts.as_plane() is None


def test_arity_mismatch():
    with pytest.raises(OracleError):
        plane("x1 - x0").contains((q("1"),))


def test_section_finite_and_cofinite():
    circ = plane("x0^2 + x1^2 - 1")
    cofinite, values = circ.section({0: q("0")}, 1)
    assert not cofinite
    assert sorted(v.rational_value for v in values) == [-1, 1]
    vert = plane("x0 - 1")
    cofinite, values = vert.section({0: q("1")}, 1)
    assert cofinite and values == []


def test_section_of_punctured_vertical_line():
    vert = plane("x0 - 1", minus=[("1", "2")])
    cofinite, values = vert.section({0: q("1")}, 1)
    assert cofinite
    assert len(values) == 1 and values[0].rational_value == 2


def test_sample_points_on_curve_reproducible():
    circ = plane("x0^2 + x1^2 - 1")
    first = circ.sample_points(8, seed=3)
    second = circ.sample_points(8, seed=3)
    assert len(first) == 8
    assert all(circ.contains(pt) for pt in first)
    assert [[c.to_text() for c in pt] for pt in first] == [[c.to_text() for c in pt] for pt in second]


def test_sample_empty_set():
    with pytest.raises(SamplingError):
        CurveSet(2).sample_points(3, seed=0)


def test_dimension_audit():
    assert plane("x0^2 + x1^2 - 1").dimension_audit(samples=8)


def _projected_sets():
    parab = FiberConjunct(0, to_poly(FIBER - PARAM**2, PARAM, FIBER))
    graph = FiberConjunct(1, to_poly(FIBER - PARAM, PARAM, FIBER))
    circle = FiberConjunct(0, to_poly(PARAM**2 + FIBER**2 - 1, PARAM, FIBER))
    anti = FiberConjunct(1, to_poly(FIBER + PARAM, PARAM, FIBER))
    linked = [FiberConjunct(i, to_poly(FIBER - PARAM, PARAM, FIBER)) for i in range(3)]
    return {
        "parab_graph": lambda: eliminate_variable([parab, graph], arity=2),
        "circle_anti": lambda: eliminate_variable([circle, anti], arity=2),
        "three_links": lambda: eliminate_variable(linked, arity=3),
        "count_circle": lambda: count_projection([circle], threshold=2),
        "count_meet": lambda: count_projection([parab, circle]),
    }


@pytest.mark.parametrize("name", ["parab_graph", "circle_anti", "three_links", "count_circle", "count_meet"])
def test_projections_pass_dimension_audit(name):
    assert _projected_sets()[name]().dimension_audit(samples=8)


def test_split_contents():
    c, d, h = split_contents(to_poly(PARAM * (FIBER - 1) * (FIBER - PARAM), PARAM, FIBER))
    assert c.as_expr() == PARAM
    assert d.as_expr() == FIBER - 1
    assert h.as_expr() in (FIBER - PARAM, PARAM - FIBER)


def test_fiber_count():
    circle = FiberConjunct(0, to_poly(PARAM**2 + FIBER**2 - 1, PARAM, FIBER))
    assert fiber_count_at([circle], [q("0")]) == 2
    assert fiber_count_at([circle], [q("1")]) == 1
    vertical = FiberConjunct(0, to_poly(PARAM - 1, PARAM, FIBER))
    assert fiber_count_at([vertical], [q("1")]) == float("inf")


def test_count_projection_threshold_two():
    circle = FiberConjunct(0, to_poly(PARAM**2 + FIBER**2 - 1, PARAM, FIBER))
    result = count_projection([circle], threshold=2)
    cofinite, values = result.as_unary()
    assert cofinite
    assert sorted(v.rational_value for v in values) == [-1, 1]


def test_count_projection_intersection():
    parab = FiberConjunct(0, to_poly(FIBER - PARAM**2, PARAM, FIBER))
    circle = FiberConjunct(0, to_poly(PARAM**2 + FIBER**2 - 1, PARAM, FIBER))
    cofinite, values = count_projection([parab, circle]).as_unary()
    assert not cofinite
    # x^4 + x^2 - 1 = 0
    assert len(values) == 4


def test_eliminate_variable_two_coordinates():
    first = FiberConjunct(0, to_poly(FIBER - PARAM**2, PARAM, FIBER))
    second = FiberConjunct(1, to_poly(FIBER - PARAM, PARAM, FIBER))
    curve = eliminate_variable([first, second], arity=2)
    assert curve.contains((q("2"), q("4")))
    assert not curve.contains((q("2"), q("5")))


def test_eliminate_variable_three_coordinates_exact_membership():
    r = [FiberConjunct(i, to_poly(FIBER - PARAM, PARAM, FIBER)) for i in range(3)]
    curve = eliminate_variable(r, arity=3)
    assert curve.arity == 3
    assert curve.contains((q("1"), q("1"), q("1")))
    assert not curve.contains((q("1"), q("1"), q("2")))


def test_eliminate_variable_rejects_unlinked_coordinate():
    with pytest.raises(OracleError):
        eliminate_variable([FiberConjunct(0, to_poly(FIBER - PARAM, PARAM, FIBER))], arity=2)


def test_minus_points_round_trip_through_dict():
    punc = plane("x1 - x0^2", minus=[("root(z^2 - 2, 1)", "2")])
    again = CurveSet.from_dict(punc.to_dict())
    assert not again.contains((q("root(z^2 - 2, 1)"), q("2")))
    assert alg_equal(again.minus.points[0][0], q("root(z^2 - 2, 1)"))
