#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Analyseur de formules
© 2025 - Licence Apache 2.0

Grammaire préfixe parenthésée (lark, LALR) et construction de l'arbre de
syntaxe abstraite, avec contrôle de la signature.
"""

from pathlib import Path
from typing import List, Union

from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedInput, VisitError

from .errors import CurveQEError, FormulaSyntaxError
from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    CountAtLeast,
    CountExactly,
    CountInfinite,
    Equals,
    Exists,
    Formula,
    Not,
    Or,
    Signature,
    check_well_formed,
)

FORMULA_GRAMMAR = r"""
    start: formula

    formula: "true"                                 -> true
            | "false"                               -> false
            | "(" "not" formula ")"                 -> not_
            | "(" "and" formula+ ")"                -> and_
            | "(" "or" formula+ ")"                 -> or_
            | "(" "exists" NAME formula ")"         -> exists
            | "(" "countGE" INT NAME formula ")"    -> count_ge
            | "(" "countEQ" INT NAME formula ")"    -> count_eq
            | "(" "countINF" NAME formula ")"       -> count_inf
            | "(" "=" NAME NAME ")"                 -> equals
            | "(" NAME NAME+ ")"                    -> atom

    NAME: /[A-Za-z_][A-Za-z0-9_']*/
    INT: /[0-9]+/
    COMMENT: /;[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_PARSER = Lark(FORMULA_GRAMMAR, parser="lalr", maybe_placeholders=False)


class FormulaBuilder(Transformer):
    """Arbre lark vers nœuds Formula"""

    def start(self, children: List[Formula]) -> Formula:
        return children[0]

    def true(self, _children) -> Formula:
        return TRUE

    def false(self, _children) -> Formula:
        return FALSE

    def not_(self, children) -> Formula:
        return Not(children[0])

    def and_(self, children) -> Formula:
        return And(tuple(children))

    def or_(self, children) -> Formula:
        return Or(tuple(children))

    def exists(self, children) -> Formula:
        var, body = children
        return Exists(str(var), body)

    def count_ge(self, children) -> Formula:
        d, var, body = children
        return CountAtLeast(int(d), str(var), body)

    def count_eq(self, children) -> Formula:
        d, var, body = children
        return CountExactly(int(d), str(var), body)

    def count_inf(self, children) -> Formula:
        var, body = children
        return CountInfinite(str(var), body)

    def equals(self, children) -> Formula:
        var, const = children
        return Equals(str(var), str(const))

    def atom(self, children: List[Token]) -> Formula:
        symbol, *args = children
        return Atom(str(symbol), tuple(str(a) for a in args))


def _position(text: str, error: UnexpectedInput):
    line = getattr(error, "line", -1)
    column = getattr(error, "column", -1)
    if line is None or line < 0:
        # fin de texte inattendue
        lines = text.splitlines() or [""]
        return len(lines), len(lines[-1]) + 1
    return line, column


def parse(text: str, sig: Signature) -> Formula:
    """
    Lit une formule et vérifie sa conformité à la signature

    Args:
        text: Source de la formule
        sig: Signature (symboles et constantes déclarés)

    Returns:
        Arbre de syntaxe abstraite

    Raises:
        FormulaSyntaxError: texte non conforme à la grammaire (ligne, colonne)
        SignatureError: symbole non déclaré, arité incorrecte, double liaison
    """
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as e:
        line, column = _position(text, e)
        raise FormulaSyntaxError("Syntaxe de formule invalide", line, column) from None
    try:
        formula = FormulaBuilder().transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, CurveQEError):
            raise e.orig_exc from None
        raise
    check_well_formed(formula, sig)
    return formula


def parse_file(path: Union[str, Path], sig: Signature) -> Formula:
    """Lit une formule depuis un fichier .sexp"""
    with open(path, "r", encoding="utf-8") as f:
        return parse(f.read(), sig)
