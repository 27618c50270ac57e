#!/usr/bin/env python3
"""
CURVE-QE - Tests du lecteur de formules
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from core.errors import FormulaSyntaxError, SignatureError  # noqa: E402
from core.formula import (  # noqa: E402
    And,
    Atom,
    CountAtLeast,
    CountExactly,
    CountInfinite,
    Equals,
    Exists,
    Not,
    Signature,
    to_text,
)
from core.oracle import CurveOracle  # noqa: E402
from core.parser import parse, parse_file  # noqa: E402

CORPUS = Path(__file__).parent / "corpus"


@pytest.fixture
def sig():
    s = Signature()
    s.declare("Parab", 2)
    s.declare("Circ", 2)
    s.declare("Pts", 1)
    s.declare_constant("c0")
    return s


def test_parse_exists(sig):
    f = parse("(exists y (and (Parab x y) (not (Circ x y))))", sig)
    assert f == Exists("y", And((Atom("Parab", ("x", "y")), Not(Atom("Circ", ("x", "y"))))))


def test_parse_counting_quantifiers(sig):
    assert parse("(countGE 2 y (Circ x y))", sig) == CountAtLeast(2, "y", Atom("Circ", ("x", "y")))
    assert parse("(countEQ 1 y (Parab x y))", sig) == CountExactly(1, "y", Atom("Parab", ("x", "y")))
    assert parse("(countINF y (Circ x y))", sig) == CountInfinite("y", Atom("Circ", ("x", "y")))


def test_parse_equals_and_comments(sig):
    f = parse("; commentaire\n(and (Pts x) (= x c0))", sig)
    assert f == And((Atom("Pts", ("x",)), Equals("x", "c0")))


def test_printer_round_trip(sig):
    text = "(countGE 2 y (and (Parab x y) (not (Circ x y)) (= y c0)))"
    assert to_text(parse(text, sig)) == text


def test_syntax_error_position(sig):
    with pytest.raises(FormulaSyntaxError) as info:
        parse("(exists y\n  (and (Parab x y) ))) extra", sig)
    assert info.value.line is not None and info.value.line >= 1


def test_unterminated_formula(sig):
    with pytest.raises(FormulaSyntaxError) as info:
        parse("(exists y (Parab x y)", sig)
    assert info.value.line == 1


def test_signature_errors(sig):
    with pytest.raises(SignatureError):
        parse("(Unknown x y)", sig)
    with pytest.raises(SignatureError):
        parse("(Parab x)", sig)
    with pytest.raises(SignatureError):
        parse("(= x c7)", sig)


def test_corpus_parses_against_shipped_signature():
    oracle = CurveOracle.from_json(CORPUS / "signature.json")
    files = sorted(CORPUS.glob("*.sexp"))
    assert len(files) >= 20
    for path in files:
        f = parse_file(path, oracle.signature)
        assert to_text(f).startswith("(")
