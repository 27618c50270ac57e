#!/usr/bin/env python3
"""
CURVE-QE - Tests du moteur d'élimination et de ses traces
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from core.algebraic import AlgebraicNumber  # noqa: E402
from core.curves import INFINITE  # noqa: E402
from core.errors import DnfExplosionError, OracleError, UnsupportedShapeError  # noqa: E402
from core.formula import (  # noqa: E402
    FALSE,
    TRUE,
    And,
    Atom,
    CountAtLeast,
    CountExactly,
    Not,
    Or,
    atoms,
    free_vars,
    is_quantifier_free,
)
from core.oracle import CurveOracle  # noqa: E402
from core.parser import parse, parse_file  # noqa: E402
from core.qe_engine import (  # noqa: E402
    RULES,
    QEEngine,
    formula_depth,
    inclusion_exclusion_rewrite,
    replay_trace,
    validate_trace,
)
from core.semantics import Evaluator, check_equivalence_sampled  # noqa: E402

CORPUS = Path(__file__).parent / "corpus"

FAST = [
    "parab_circ",
    "parab_graph",
    "circ_alone",
    "hyp_graph",
    "circ_count2",
    "vert_infinite",
    "cusp_sq",
    "circ_at_const",
]


@pytest.fixture
def oracle():
    return CurveOracle.from_json(CORPUS / "signature.json", seed=5)


def _check_corpus_file(name, oracle, points):
    f = parse_file(CORPUS / f"{name}.sexp", oracle.signature)
    out, trace = QEEngine(oracle).qe(f)
    assert is_quantifier_free(out)
    assert validate_trace(trace) == []
    assert replay_trace(trace) == out
    report = check_equivalence_sampled(f, out, oracle, n=points, seed=7)
    assert report.agree, report.disagreements[:3]
    assert report.points_checked >= points
    return out, trace


@pytest.mark.parametrize("name", FAST)
def test_corpus_fast_subset(name, oracle):
    _check_corpus_file(name, oracle, points=60)


@pytest.mark.slow
def test_corpus_full():
    for path in sorted(CORPUS.glob("*.sexp")):
        if path.stem == "example21_T":
            continue
        oracle = CurveOracle.from_json(CORPUS / "signature.json")
        _check_corpus_file(path.stem, oracle, points=500)


@pytest.mark.slow
def test_eliminating_y_from_three_r_atoms_needs_ternary_atom(oracle):
    f = parse_file(CORPUS / "example21_T.sexp", oracle.signature)
    out, trace = QEEngine(oracle).qe(f)
    assert validate_trace(trace) == []
    assert max(len(a.args) for a in atoms(out)) >= 3


def test_quantifier_free_input_unchanged(oracle):
    f = parse("(and (Parab x y) (not (Circ x y)))", oracle.signature)
    out, trace = QEEngine(oracle).qe(f)
    assert out == f
    assert trace.steps == []
    assert validate_trace(trace) == []


def test_exists_parabola_is_true(oracle):
    f = parse("(exists y (Parab x y))", oracle.signature)
    out, _ = QEEngine(oracle).qe(f)
    report = check_equivalence_sampled(TRUE, out, oracle, n=40, seed=1)
    assert report.agree


def test_dnf_cap_reached(oracle):
    f = parse(
        "(exists y (and (or (Parab x y) (Circ x y)) (or (Graph x y) (Anti x y)) (or (Hyp x y) (Cusp x y))))",
        oracle.signature,
    )
    with pytest.raises(DnfExplosionError):
        QEEngine(oracle, dnf_cap=4).qe(f)


def test_point_set_in_bound_position_unsupported(oracle):
    f = parse("(exists y (Zero2 x y))", oracle.signature)
    with pytest.raises(UnsupportedShapeError):
        QEEngine(oracle).qe(f)


def test_eliminate_block_requires_block(oracle):
    engine = QEEngine(oracle)
    with pytest.raises(UnsupportedShapeError):
        engine.eliminate_block(parse("(Parab x y)", oracle.signature))
    with pytest.raises(UnsupportedShapeError):
        engine.eliminate_counting(0, "y", [Atom("Parab", ("x", "y"))])


def test_trace_tags_and_serialization(oracle):
    f = parse_file(CORPUS / "circ_count2_not_graph.sexp", oracle.signature)
    out, trace = QEEngine(oracle).qe(f)
    data = trace.to_dict()
    assert data["output"] == str(out)

    def rules(step):
        yield step["rule"]
        for key in ("children", "prelude"):
            for child in step.get(key, []):
                yield from rules(child)

    seen = {r for s in data["steps"] for r in rules(s)}
    assert seen and seen <= set(RULES)
    assert "shape-(1)" in seen


def test_finite_case_audits_uniform_bound(oracle):
    f = parse_file(CORPUS / "circ_count2_not_graph.sexp", oracle.signature)
    engine = QEEngine(oracle)
    engine.qe(f)
    assert engine.audited
    evaluator = Evaluator(oracle)
    for (var, literals), bound in engine.audited.items():
        assert bound == oracle.uniform_bound(var, literals)
        assert oracle.audit_uniform_bound(var, literals) is None
        partners = sorted({v for lit in literals for v in free_vars(lit)} - {var} - set(oracle.constants))
        for point in oracle.partner_points(partners, 12):
            count = evaluator.count(var, And(tuple(literals)), point)
            assert count == INFINITE or count <= bound


def test_uniform_bound_audit_reports_oversized_fiber(oracle, monkeypatch):
    circle = parse("(Circ x y)", oracle.signature)
    # deux points de fibre : une borne de 1 est fausse en x = 0
    monkeypatch.setattr(oracle, "uniform_bound", lambda var, literals: 1)
    witness = oracle.audit_uniform_bound("y", [circle], points=[{"x": AlgebraicNumber.rational(0)}])
    assert witness == {"bound": 1, "count": 2, "point": {"x": "0"}}
    with pytest.raises(OracleError):
        QEEngine(oracle)._audited_bound("y", [circle])


@pytest.mark.parametrize("name", FAST + ["circ_count2_not_graph"])
def test_registered_sets_pass_dimension_audit(name, oracle):
    declared = set(oracle.curves)
    f = parse_file(CORPUS / f"{name}.sexp", oracle.signature)
    QEEngine(oracle).qe(f)
    produced = {s: c for s, c in oracle.curves.items() if s not in declared}
    for symbol, curve in produced.items():
        assert curve.dimension_audit(samples=8), symbol


def test_formula_depth():
    p = Atom("P", ("x", "y"))
    assert formula_depth(p) == 1
    assert formula_depth(And((p, Not(p)))) == 3


# -- inclusion-exclusion --------------------------------------------------


def _count_in(universe, sets, var, body):
    return sum(1 for u in universe if _holds(body, universe, sets, {var: u}))


def _holds(f, universe, sets, env):
    if f == TRUE:
        return True
    if f == FALSE:
        return False
    if isinstance(f, Atom):
        return env[f.args[0]] in sets[f.symbol]
    if isinstance(f, Not):
        return not _holds(f.arg, universe, sets, env)
    if isinstance(f, And):
        return all(_holds(a, universe, sets, env) for a in f.args)
    if isinstance(f, Or):
        return any(_holds(a, universe, sets, env) for a in f.args)
    if isinstance(f, CountAtLeast):
        return _count_in(universe, sets, f.var, f.body) >= f.d
    if isinstance(f, CountExactly):
        return _count_in(universe, sets, f.var, f.body) == f.d
    raise AssertionError(f"noeud inattendu: {f}")


def test_inclusion_exclusion_identity_on_random_set_systems():
    rng = np.random.default_rng(2024)
    universe = list(range(6))
    for _ in range(100):
        t = int(rng.integers(1, 4))
        d = int(rng.integers(0, 5))
        sets = {f"F{h}": {u for u in universe if rng.random() < 0.4} for h in range(t)}
        families = [[Atom(f"F{h}", ("y",))] for h in range(t)]
        rewritten = inclusion_exclusion_rewrite(d, "y", [], families, cap=4096)
        union = set().union(*sets.values())
        assert _holds(rewritten, universe, sets, {}) == (len(union) == d), (sets, d)


def test_inclusion_exclusion_with_common_conjunct():
    universe = list(range(5))
    sets = {"C": {0, 1, 2, 3}, "F0": {0, 1, 4}, "F1": {1, 2}}
    families = [[Atom("F0", ("y",))], [Atom("F1", ("y",))]]
    for d in range(5):
        f = inclusion_exclusion_rewrite(d, "y", [Atom("C", ("y",))], families)
        assert _holds(f, universe, sets, {}) == (d == 3)


def test_inclusion_exclusion_cap():
    families = [[Atom("F0", ("y",))], [Atom("F1", ("y",))]]
    with pytest.raises(DnfExplosionError):
        inclusion_exclusion_rewrite(3, "y", [], families, cap=2)
    assert inclusion_exclusion_rewrite(0, "y", [], []) == TRUE
    assert inclusion_exclusion_rewrite(2, "y", [], []) == FALSE
