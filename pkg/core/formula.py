#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Formules
© 2025 - Licence Apache 2.0

Syntaxe abstraite des formules du premier ordre sur un vocabulaire de
prédicats de courbes, avec quantificateurs de comptage. Les formules sont
des valeurs immuables ; la signature associe chaque symbole à son arité et
à la courbe correspondante (gérée par l'oracle géométrique).
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, Optional, Protocol, Sequence, Tuple

from .errors import DnfExplosionError, SignatureError, SubstitutionError

DNF_CAP = 256


class Formula:
    """Classe de base des nœuds de formule"""

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, eq=True)
class TrueFormula(Formula):
    pass


@dataclass(frozen=True, eq=True)
class FalseFormula(Formula):
    pass


TRUE = TrueFormula()
FALSE = FalseFormula()


@dataclass(frozen=True, eq=True)
class Atom(Formula):
    """Application d'un symbole de courbe à des variables distinctes"""

    symbol: str
    args: Tuple[str, ...]


@dataclass(frozen=True, eq=True)
class Equals(Formula):
    """var = constante algébrique (par son nom dans la table de l'oracle)"""

    var: str
    const: str


@dataclass(frozen=True, eq=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, eq=True)
class And(Formula):
    args: Tuple[Formula, ...]


@dataclass(frozen=True, eq=True)
class Or(Formula):
    args: Tuple[Formula, ...]


@dataclass(frozen=True, eq=True)
class Quantifier(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, eq=True)
class Exists(Quantifier):
    pass


@dataclass(frozen=True, eq=True)
class CountInfinite(Quantifier):
    pass


@dataclass(frozen=True, eq=True)
class CountAtLeast(Formula):
    d: int
    var: str
    body: Formula


@dataclass(frozen=True, eq=True)
class CountExactly(Formula):
    d: int
    var: str
    body: Formula


QUANTIFIERS = (Exists, CountInfinite, CountAtLeast, CountExactly)


def rebuild_quantifier(q: Formula, body: Formula) -> Formula:
    """Même quantificateur, nouveau corps"""
    if isinstance(q, (CountAtLeast, CountExactly)):
        return type(q)(q.d, q.var, body)
    return type(q)(q.var, body)


def conj(*args: Formula) -> Formula:
    return simplify(And(tuple(args)))


def disj(*args: Formula) -> Formula:
    return simplify(Or(tuple(args)))


# ---------------------------------------------------------------------------
# Signature
# ---------------------------------------------------------------------------


class SectionResolver(Protocol):
    """Services géométriques requis par la substitution de constantes"""

    def register_section(self, atom: Atom, fixed: Dict[int, str]) -> Formula:
        ...

    def constants_equal(self, first: str, second: str) -> bool:
        ...


@dataclass(frozen=True)
class SymbolDecl:
    name: str
    arity: int
    handle: str


@dataclass
class Signature:
    """Symboles de courbes déclarés et constantes nommées"""

    symbols: Dict[str, SymbolDecl] = field(default_factory=dict)
    constants: Dict[str, str] = field(default_factory=dict)
    resolver: Optional[SectionResolver] = None
    _counters: Dict[str, int] = field(default_factory=dict)

    def declare(self, name: str, arity: int, handle: Optional[str] = None) -> SymbolDecl:
        if arity < 1:
            raise SignatureError(f"Arité invalide pour {name}: {arity}")
        existing = self.symbols.get(name)
        if existing is not None and existing.arity != arity:
            raise SignatureError(f"Symbole {name} déjà déclaré avec l'arité {existing.arity}")
        decl = SymbolDecl(name, arity, handle or name)
        self.symbols[name] = decl
        return decl

    def declare_constant(self, name: str, handle: Optional[str] = None) -> None:
        self.constants[name] = handle or name

    def lookup(self, name: str) -> SymbolDecl:
        try:
            return self.symbols[name]
        except KeyError:
            raise SignatureError(f"Symbole non déclaré: {name}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.symbols

    def fresh_name(self, prefix: str) -> str:
        """Nom inutilisé de la forme <prefix><n>"""
        n = self._counters.get(prefix, 0)
        while f"{prefix}{n}" in self.symbols or f"{prefix}{n}" in self.constants:
            n += 1
        self._counters[prefix] = n + 1
        return f"{prefix}{n}"


# ---------------------------------------------------------------------------
# Parcours
# ---------------------------------------------------------------------------


def children(f: Formula) -> Tuple[Formula, ...]:
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, QUANTIFIERS):
        return (f.body,)
    return ()


def walk(f: Formula) -> Iterator[Formula]:
    """Parcours préfixe de tous les sous-nœuds"""
    yield f
    for child in children(f):
        yield from walk(child)


def free_vars(f: Formula) -> FrozenSet[str]:
    """Variables libres"""
    if isinstance(f, Atom):
        return frozenset(f.args)
    if isinstance(f, Equals):
        return frozenset((f.var,))
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    result: FrozenSet[str] = frozenset()
    for child in children(f):
        result |= free_vars(child)
    return result


def bound_vars(f: Formula) -> FrozenSet[str]:
    return frozenset(node.var for node in walk(f) if isinstance(node, QUANTIFIERS))


def atoms(f: Formula) -> List[Atom]:
    """Atomes de courbe, dans l'ordre d'apparition, sans doublon"""
    seen: List[Atom] = []
    for node in walk(f):
        if isinstance(node, Atom) and node not in seen:
            seen.append(node)
    return seen


def is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(node, QUANTIFIERS) for node in walk(f))


def check_well_formed(f: Formula, sig: Signature, bound: FrozenSet[str] = frozenset()) -> None:
    """
    Vérifie arités, constantes déclarées et absence de double liaison

    Raises:
        SignatureError: symbole inconnu, arité ou liaison invalide
    """
    if isinstance(f, Atom):
        decl = sig.lookup(f.symbol)
        if decl.arity != len(f.args):
            raise SignatureError(f"Arité de {f.symbol}: attendu {decl.arity}, reçu {len(f.args)}")
        if len(set(f.args)) != len(f.args):
            raise SignatureError(f"Variables répétées dans {to_text(f)}")
        return
    if isinstance(f, Equals):
        if f.const not in sig.constants:
            raise SignatureError(f"Constante non déclarée: {f.const}")
        return
    if isinstance(f, QUANTIFIERS):
        if f.var in bound:
            raise SignatureError(f"Variable {f.var} liée deux fois sur une même branche")
        if isinstance(f, (CountAtLeast, CountExactly)) and f.d < 0:
            raise SignatureError(f"Seuil de comptage négatif: {f.d}")
        check_well_formed(f.body, sig, bound | {f.var})
        return
    for child in children(f):
        check_well_formed(child, sig, bound)


# ---------------------------------------------------------------------------
# Impression
# ---------------------------------------------------------------------------


def to_text(f: Formula) -> str:
    """Forme préfixe parenthésée, relue à l'identique par parse"""
    if isinstance(f, TrueFormula):
        return "true"
    if isinstance(f, FalseFormula):
        return "false"
    if isinstance(f, Atom):
        return f"({f.symbol} {' '.join(f.args)})"
    if isinstance(f, Equals):
        return f"(= {f.var} {f.const})"
    if isinstance(f, Not):
        return f"(not {to_text(f.arg)})"
    if isinstance(f, And):
        return "(and " + " ".join(to_text(a) for a in f.args) + ")" if f.args else "true"
    if isinstance(f, Or):
        return "(or " + " ".join(to_text(a) for a in f.args) + ")" if f.args else "false"
    if isinstance(f, Exists):
        return f"(exists {f.var} {to_text(f.body)})"
    if isinstance(f, CountAtLeast):
        return f"(countGE {f.d} {f.var} {to_text(f.body)})"
    if isinstance(f, CountExactly):
        return f"(countEQ {f.d} {f.var} {to_text(f.body)})"
    if isinstance(f, CountInfinite):
        return f"(countINF {f.var} {to_text(f.body)})"
    raise TypeError(f"Nœud inconnu: {f!r}")


# ---------------------------------------------------------------------------
# Normalisation
# ---------------------------------------------------------------------------


def simplify(f: Formula) -> Formula:
    """Aplatissement, constantes booléennes, doublons et littéraux complémentaires"""
    if isinstance(f, Not):
        arg = simplify(f.arg)
        if isinstance(arg, TrueFormula):
            return FALSE
        if isinstance(arg, FalseFormula):
            return TRUE
        if isinstance(arg, Not):
            return arg.arg
        return Not(arg)
    if isinstance(f, (And, Or)):
        is_and = isinstance(f, And)
        unit, absorbing = (TRUE, FALSE) if is_and else (FALSE, TRUE)
        flat: List[Formula] = []
        for arg in f.args:
            arg = simplify(arg)
            parts = arg.args if isinstance(arg, type(f)) else (arg,)
            for part in parts:
                if part == absorbing:
                    return absorbing
                if part != unit and part not in flat:
                    flat.append(part)
        for part in flat:
            if Not(part) in flat:
                return absorbing
        if not flat:
            return unit
        if len(flat) == 1:
            return flat[0]
        return And(tuple(flat)) if is_and else Or(tuple(flat))
    if isinstance(f, Exists):
        return simplify(CountAtLeast(1, f.var, f.body))
    if isinstance(f, CountAtLeast):
        if f.d <= 0:
            return TRUE
        body = simplify(f.body)
        if isinstance(body, (TrueFormula, FalseFormula)):
            return body
        if f.var not in free_vars(body):
            return body
        return CountAtLeast(f.d, f.var, body)
    if isinstance(f, CountExactly):
        body = simplify(f.body)
        if isinstance(body, FalseFormula):
            return TRUE if f.d == 0 else FALSE
        if isinstance(body, TrueFormula):
            return FALSE
        if f.var not in free_vars(body):
            return simplify(Not(body)) if f.d == 0 else FALSE
        if f.d == 0:
            return Not(CountAtLeast(1, f.var, body))
        return CountExactly(f.d, f.var, body)
    if isinstance(f, CountInfinite):
        body = simplify(f.body)
        if isinstance(body, (TrueFormula, FalseFormula)):
            return body
        if f.var not in free_vars(body):
            return body
        return CountInfinite(f.var, body)
    return f


def normalize(f: Formula) -> Formula:
    """exists devient countGE 1, puis simplification"""
    return simplify(f)


def to_nnf(f: Formula) -> Formula:
    """Négations poussées jusqu'aux littéraux (sous-formules quantifiées opaques)"""
    if isinstance(f, Not):
        g = f.arg
        if isinstance(g, Not):
            return to_nnf(g.arg)
        if isinstance(g, And):
            return Or(tuple(to_nnf(Not(a)) for a in g.args))
        if isinstance(g, Or):
            return And(tuple(to_nnf(Not(a)) for a in g.args))
        if isinstance(g, TrueFormula):
            return FALSE
        if isinstance(g, FalseFormula):
            return TRUE
        return f
    if isinstance(f, And):
        return And(tuple(to_nnf(a) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(to_nnf(a) for a in f.args))
    return f


def dnf_disjuncts(f: Formula, cap: int = DNF_CAP) -> List[List[Formula]]:
    """
    Disjonction de conjonctions de littéraux

    Les sous-formules quantifiées sont traitées comme des littéraux.

    Raises:
        DnfExplosionError: plus de cap disjonctions
    """
    f = to_nnf(simplify(f))

    def expand(g: Formula) -> List[List[Formula]]:
        if isinstance(g, TrueFormula):
            return [[]]
        if isinstance(g, FalseFormula):
            return []
        if isinstance(g, Or):
            result: List[List[Formula]] = []
            for a in g.args:
                result.extend(expand(a))
                if len(result) > cap:
                    raise DnfExplosionError(len(result), cap)
            return result
        if isinstance(g, And):
            parts = [expand(a) for a in g.args]
            size = 1
            for p in parts:
                size *= len(p)
            if size > cap:
                raise DnfExplosionError(size, cap)
            result = []
            for combo in product(*parts):
                merged: List[Formula] = []
                for lits in combo:
                    for lit in lits:
                        if lit not in merged:
                            merged.append(lit)
                result.append(merged)
            return result
        return [[g]]

    disjuncts = []
    for lits in expand(f):
        if any(Not(lit) in lits for lit in lits):
            continue
        if lits not in disjuncts:
            disjuncts.append(lits)
    return disjuncts


def from_disjuncts(disjuncts: Sequence[Sequence[Formula]]) -> Formula:
    return simplify(Or(tuple(And(tuple(lits)) for lits in disjuncts)))


def to_dnf_matrix(f: Formula, cap: int = DNF_CAP) -> Formula:
    """Met en DNF la matrice de chaque bloc de quantificateurs"""

    def inner(g: Formula) -> Formula:
        if isinstance(g, QUANTIFIERS):
            return rebuild_quantifier(g, to_dnf_matrix(g.body, cap))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(inner(a) for a in g.args))
        if isinstance(g, Not):
            return Not(inner(g.arg))
        return g

    return from_disjuncts(dnf_disjuncts(inner(normalize(f)), cap))


def is_cylinder_combination(
    f: Formula, sig: Signature, ambient: Optional[Sequence[str]] = None
) -> bool:
    """Sans quantificateur, symboles déclarés aux bonnes arités, variables dans ambient"""
    if not is_quantifier_free(f):
        return False
    for node in walk(f):
        if isinstance(node, Atom):
            if node.symbol not in sig or sig.lookup(node.symbol).arity != len(node.args):
                return False
        elif isinstance(node, Equals):
            if node.const not in sig.constants:
                return False
    if ambient is not None and not free_vars(f) <= set(ambient):
        return False
    return True


def substitute_constant(f: Formula, var: str, const: str, sig: Signature) -> Formula:
    """
    Remplace chaque occurrence libre de var par la constante const

    Les atomes touchés deviennent des sections, enregistrées par le
    résolveur de la signature.

    Raises:
        SubstitutionError: var est liée dans f
    """
    if var in bound_vars(f):
        raise SubstitutionError(f"{var} est liée dans {to_text(f)}")
    if sig.resolver is None:
        raise SubstitutionError("Aucun résolveur de sections dans la signature")

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom):
            if var not in g.args:
                return g
            return sig.resolver.register_section(g, {g.args.index(var): const})
        if isinstance(g, Equals):
            if g.var != var:
                return g
            return TRUE if sig.resolver.constants_equal(const, g.const) else FALSE
        if isinstance(g, Not):
            return Not(go(g.arg))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(go(a) for a in g.args))
        if isinstance(g, QUANTIFIERS):
            return rebuild_quantifier(g, go(g.body))
        return g

    return simplify(go(f))
