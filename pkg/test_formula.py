#!/usr/bin/env python3
"""
CURVE-QE - Tests de la syntaxe abstraite et des formes normales
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from core.errors import DnfExplosionError, SignatureError, SubstitutionError  # noqa: E402
from core.formula import (  # noqa: E402
    FALSE,
    TRUE,
    And,
    Atom,
    CountAtLeast,
    CountExactly,
    Equals,
    Exists,
    Not,
    Or,
    Signature,
    atoms,
    check_well_formed,
    dnf_disjuncts,
    free_vars,
    from_disjuncts,
    is_cylinder_combination,
    is_quantifier_free,
    simplify,
    substitute_constant,
    to_nnf,
    to_text,
)

P = Atom("P", ("x", "y"))
Q = Atom("Q", ("x", "y"))
U = Atom("U", ("x",))


@pytest.fixture
def sig():
    s = Signature()
    s.declare("P", 2)
    s.declare("Q", 2)
    s.declare("U", 1)
    s.declare_constant("c0")
    return s


def test_free_vars():
    f = Exists("y", And((P, U)))
    assert free_vars(f) == frozenset({"x"})
    assert free_vars(Equals("z", "c0")) == frozenset({"z"})


def test_to_text():
    f = CountAtLeast(2, "y", And((P, Not(Q))))
    assert to_text(f) == "(countGE 2 y (and (P x y) (not (Q x y))))"
    assert str(Exists("y", P)) == "(exists y (P x y))"


def test_simplify_constants_and_duplicates():
    assert simplify(And((P, TRUE, P))) == P
    assert simplify(Or((P, Not(P)))) == TRUE
    assert simplify(And((P, Not(P)))) == FALSE
    assert simplify(Not(Not(P))) == P
    assert simplify(And((And((P, Q)), U))) == And((P, Q, U))


def test_simplify_quantifiers():
    assert simplify(Exists("y", P)) == CountAtLeast(1, "y", P)
    assert simplify(CountAtLeast(0, "y", P)) == TRUE
    # corps sans la variable liée
    assert simplify(CountAtLeast(2, "y", U)) == U
    assert simplify(CountExactly(0, "y", P)) == Not(CountAtLeast(1, "y", P))
    assert simplify(CountExactly(3, "y", FALSE)) == FALSE


def test_to_nnf():
    f = to_nnf(Not(And((P, Or((Q, Not(U)))))))
    assert f == Or((Not(P), And((Not(Q), U))))


def test_dnf_disjuncts():
    f = And((Or((P, Q)), U))
    assert dnf_disjuncts(f) == [[P, U], [Q, U]]
    assert from_disjuncts(dnf_disjuncts(f)) == Or((And((P, U)), And((Q, U))))


def test_dnf_drops_contradictory_disjuncts():
    f = And((Or((P, Not(U))), U))
    assert dnf_disjuncts(f) == [[P, U]]


def test_dnf_cap():
    big = And(tuple(Or((Atom(f"A{i}", ("x",)), Atom(f"B{i}", ("x",)))) for i in range(10)))
    with pytest.raises(DnfExplosionError):
        dnf_disjuncts(big, cap=64)


def test_atoms_and_quantifier_free():
    f = Or((P, Exists("y", And((P, Q)))))
    assert atoms(f) == [P, Q]
    assert not is_quantifier_free(f)
    assert is_quantifier_free(And((P, Not(Q))))


def test_check_well_formed(sig):
    check_well_formed(Exists("y", And((P, Equals("x", "c0")))), sig)
    with pytest.raises(SignatureError):
        check_well_formed(Atom("P", ("x",)), sig)
    with pytest.raises(SignatureError):
        check_well_formed(Atom("Missing", ("x",)), sig)
    with pytest.raises(SignatureError):
        check_well_formed(Exists("y", Exists("y", P)), sig)
    with pytest.raises(SignatureError):
        check_well_formed(Atom("P", ("x", "x")), sig)
    with pytest.raises(SignatureError):
        check_well_formed(Equals("x", "c9"), sig)


def test_is_cylinder_combination(sig):
    assert is_cylinder_combination(Or((P, Not(U))), sig, ["x", "y"])
    assert not is_cylinder_combination(Or((P, Not(U))), sig, ["x"])
    assert not is_cylinder_combination(Exists("y", P), sig)


def test_signature_fresh_names(sig):
    assert sig.fresh_name("C") == "C0"
    assert sig.fresh_name("C") == "C1"
    sig.declare("C2", 1)
    assert sig.fresh_name("C") == "C3"
    with pytest.raises(SignatureError):
        sig.declare("P", 3)


def test_substitute_constant_rejects_bound_variable(sig):
    class Resolver:
        def register_section(self, atom, fixed):
            return Atom("S", tuple(a for i, a in enumerate(atom.args) if i not in fixed))

        def constants_equal(self, first, second):
            return first == second

    sig.resolver = Resolver()
    with pytest.raises(SubstitutionError):
        substitute_constant(Exists("x", P), "x", "c0", sig)
    out = substitute_constant(And((P, Equals("x", "c0"))), "x", "c0", sig)
    assert out == Atom("S", ("y",))
