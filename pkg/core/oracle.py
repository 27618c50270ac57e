#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Oracle géométrique
© 2025 - Licence Apache 2.0

Contrat des services géométriques requis par l'élimination des
quantificateurs, et son implémentation pour les courbes constructibles
à coefficients rationnels : regroupement effectif, courbes de comptage,
lieux de fibres infinies, bornes uniformes, sections et évaluation exacte.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Protocol, Sequence, Tuple, Union

import numpy as np
from sympy import Poly

from .algebra import degree_in
from .algebraic import AlgebraicNumber, alg_equal, distinct
from .curves import (
    FIBER,
    INFINITE,
    CurveSet,
    FiberConjunct,
    SectionComponent,
    eliminate_variable,
    fiber_count_at,
    horizontal_locus,
    random_rational,
    vertical_locus,
)
from .errors import OracleError, SignatureError, UnsupportedShapeError
from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Equals,
    Formula,
    Not,
    Or,
    Signature,
    atoms,
    simplify,
    substitute_constant,
    to_text,
)
from .logger import Logger


@dataclass
class PlaneLiteral:
    """Atome binaire vu au-dessus de sa variable partenaire"""

    atom: Atom
    other: str
    poly: Poly
    minus: List[Tuple[AlgebraicNumber, AlgebraicNumber]] = field(default_factory=list)

    def conjunct(self, index: int) -> FiberConjunct:
        return FiberConjunct(index, self.poly, list(self.minus))


@dataclass
class UnaryLiteral:
    """Contrainte sur la seule variable liée : ensemble fini ou cofini"""

    formula: Formula
    cofinite: bool
    values: List[AlgebraicNumber]


Literal = Union[PlaneLiteral, UnaryLiteral]


@dataclass
class Grouping:
    """
    Décomposition d'une conjonction positive en y :
    E(x', y) (y hors des q_l) ou bien y = q_l et phi_l(x')
    """

    var: str
    literals: List[Formula]
    planes: List[PlaneLiteral]
    unaries: List[UnaryLiteral]
    constants: List[str]
    phis: List[Formula]
    curve_empty: bool = False

    @property
    def partners(self) -> List[str]:
        seen: List[str] = []
        for p in self.planes:
            if p.other not in seen:
                seen.append(p.other)
        return seen

    def curve_formula(self) -> Formula:
        """E écrit comme conjonction (pour les traces)"""
        if self.curve_empty:
            return FALSE
        parts: List[Formula] = list(self.literals)
        parts.extend(Not(Equals(self.var, c)) for c in self.constants)
        return simplify(And(tuple(parts)))


class GeometricOracle(Protocol):
    """Services géométriques consommés par le moteur d'élimination"""

    signature: Signature

    def group(self, var: str, literals: Sequence[Formula]) -> Grouping:
        ...

    def count_curve(self, grouping: Grouping, e: int) -> Formula:
        ...

    def infinite_locus(self, literal: Formula, var: str) -> List[str]:
        ...

    def infinite_condition(self, literal: Formula, var: str) -> Formula:
        ...

    def uniform_bound(self, var: str, literals: Sequence[Formula]) -> int:
        ...

    def audit_uniform_bound(self, var: str, literals: Sequence[Formula]) -> Optional[Dict[str, Any]]:
        ...

    def register_section(self, atom: Atom, fixed: Dict[int, str]) -> Formula:
        ...

    def complement_literal(self, literal: Formula, var: str) -> Formula:
        ...

    def is_plane_literal(self, literal: Formula, var: str) -> bool:
        ...

    def constants_equal(self, first: str, second: str) -> bool:
        ...

    def eval(self, atom: Atom, point: Mapping[str, AlgebraicNumber]) -> bool:
        ...


class CurveOracle:
    """Oracle des courbes constructibles (tables de courbes et de constantes)"""

    def __init__(self, seed: int = 20240601):
        self.logger = Logger("CurveOracle")
        self.seed = seed
        self.signature = Signature(resolver=self)
        self.curves: Dict[str, CurveSet] = {}
        self.constants: Dict[str, AlgebraicNumber] = {}
        self._curve_keys: Dict[str, str] = {}
        self._count_cache: Dict[Tuple[str, ...], Formula] = {}

    # -- chargement -----------------------------------------------------

    @classmethod
    def from_json(cls, path: Union[str, Path], seed: int = 20240601) -> "CurveOracle":
        """Charge une signature {symbols: [{name, arity, curve}], constants: {nom: valeur}}"""
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        oracle = cls(seed=seed)
        oracle.load_signature(data)
        return oracle

    def load_signature(self, data: Dict[str, Any]) -> None:
        for entry in data.get("symbols", []):
            curve = CurveSet.from_dict({"arity": entry["arity"], **entry["curve"]})
            if curve.arity != int(entry["arity"]):
                raise SignatureError(f"Arité incohérente pour {entry['name']}")
            self.declare_curve(entry["name"], curve)
        for name, value in data.get("constants", {}).items():
            self.declare_constant(name, AlgebraicNumber.from_text(value))
        self.logger.info(
            "Signature chargée", {"symbols": len(self.curves), "constants": len(self.constants)}
        )

    def declare_curve(self, name: str, curve: CurveSet) -> None:
        self.signature.declare(name, curve.arity)
        self.curves[name] = curve
        self._curve_keys.setdefault(self._curve_key(curve), name)

    def declare_constant(self, name: str, value: AlgebraicNumber) -> None:
        self.signature.declare_constant(name)
        self.constants[name] = value

    # -- tables ---------------------------------------------------------

    @staticmethod
    def _curve_key(curve: CurveSet) -> str:
        return json.dumps(curve.to_dict(), sort_keys=True)

    def register_curve(self, curve: CurveSet, prefix: str) -> str:
        """Nom du symbole portant curve (réutilisé si déjà enregistré)"""
        key = self._curve_key(curve)
        name = self._curve_keys.get(key)
        if name is not None:
            return name
        name = self.signature.fresh_name(prefix)
        self.declare_curve(name, curve)
        self.logger.debug("Symbole enregistré", {"symbol": name, "arity": curve.arity})
        return name

    def register_constant(self, value: AlgebraicNumber, prefix: str = "r") -> str:
        """Nom de la constante égale à value (réutilisée si déjà présente)"""
        for name, existing in self.constants.items():
            if alg_equal(existing, value):
                return name
        name = self.signature.fresh_name(prefix)
        self.declare_constant(name, value)
        return name

    def constant(self, name: str) -> AlgebraicNumber:
        try:
            return self.constants[name]
        except KeyError:
            raise SignatureError(f"Constante non déclarée: {name}") from None

    def curve(self, symbol: str) -> CurveSet:
        try:
            return self.curves[symbol]
        except KeyError:
            raise SignatureError(f"Symbole non déclaré: {symbol}") from None

    def constants_equal(self, first: str, second: str) -> bool:
        return alg_equal(self.constant(first), self.constant(second))

    # -- sémantique -----------------------------------------------------

    def eval(self, atom: Atom, point: Mapping[str, AlgebraicNumber]) -> bool:
        """Appartenance exacte du point (valeurs des arguments) à la courbe"""
        return self.curve(atom.symbol).contains(tuple(point[a] for a in atom.args))

    def fiber(self, atom: Atom, var: str, point: Mapping[str, AlgebraicNumber]) -> Tuple[bool, List[AlgebraicNumber]]:
        """
        Valeurs de var satisfaisant l'atome, les autres arguments fixés

        Returns:
            (cofinite, values)
        """
        curve = self.curve(atom.symbol)
        free = atom.args.index(var)
        if curve.arity == 1:
            unary = curve.as_unary()
            if unary is None:
                raise UnsupportedShapeError(f"Ensemble unaire non classé: {atom.symbol}")
            return unary
        fixed = {i: point[a] for i, a in enumerate(atom.args) if i != free}
        return curve.section(fixed, free)

    # -- classification -------------------------------------------------

    def classify(self, literal: Formula, var: str) -> Literal:
        """Littéral positif en var : courbe plane épointée ou contrainte unaire"""
        if isinstance(literal, Equals) and literal.var == var:
            return UnaryLiteral(literal, False, [self.constant(literal.const)])
        if not isinstance(literal, Atom) or var not in literal.args:
            raise UnsupportedShapeError(f"Littéral inattendu pour {var}: {to_text(literal)}")
        curve = self.curve(literal.symbol)
        if curve.arity == 1:
            unary = curve.as_unary()
            if unary is None:
                raise UnsupportedShapeError(f"Ensemble unaire non classé: {literal.symbol}")
            return UnaryLiteral(literal, unary[0], unary[1])
        if curve.arity > 2:
            raise UnsupportedShapeError(f"Atome d'arité {curve.arity} contenant la variable liée: {to_text(literal)}")
        plane = curve.as_plane()
        if plane is None:
            raise UnsupportedShapeError(f"Atome binaire hors courbe plane en position liée: {to_text(literal)}")
        component, minus = plane
        y_index = literal.args.index(var)
        return PlaneLiteral(
            literal,
            literal.args[1 - y_index],
            component.view(y_index),
            [(pt[1 - y_index], pt[y_index]) for pt in minus],
        )

    def is_plane_literal(self, literal: Formula, var: str) -> bool:
        return isinstance(self.classify(literal, var), PlaneLiteral)

    def unary_formula(self, cofinite: bool, values: Sequence[AlgebraicNumber], var: str) -> Formula:
        """Atome positif pour un ensemble unaire fini ou cofini"""
        values = distinct(values)
        if not values:
            return TRUE if cofinite else FALSE
        if cofinite:
            name = self.register_curve(CurveSet.cofinite(values), "cof")
        else:
            name = self.register_curve(CurveSet.finite_unary(values), "fin")
        return Atom(name, (var,))

    def complement_literal(self, literal: Formula, var: str) -> Formula:
        """Négation d'une contrainte unaire en var, réécrite en atome positif"""
        inner = literal.arg if isinstance(literal, Not) else literal
        unary = self.classify(inner, var)
        if not isinstance(unary, UnaryLiteral):
            raise UnsupportedShapeError(f"Complément d'un littéral non unaire: {to_text(literal)}")
        return self.unary_formula(not unary.cofinite, unary.values, var)

    # -- services d'élimination -----------------------------------------

    def group(self, var: str, literals: Sequence[Formula]) -> Grouping:
        """
        Effectivise le regroupement : les q_l sont les valeurs de y au-dessus
        desquelles un conjoint a une fibre infinie (ou les points d'un conjoint
        fini), phi_l la conjonction des sections en y = q_l
        """
        literals = list(literals)
        classified = [self.classify(lit, var) for lit in literals]
        planes = [c for c in classified if isinstance(c, PlaneLiteral)]
        unaries = [c for c in classified if isinstance(c, UnaryLiteral)]
        finite = next((u for u in unaries if not u.cofinite), None)
        if finite is not None:
            values = finite.values
            curve_empty = True
        else:
            values = []
            for p in planes:
                values.extend(horizontal_locus(p.poly))
            for u in unaries:
                values.extend(u.values)
            values = distinct(values)
            curve_empty = False
        names = [self.register_constant(v, "q") for v in values]
        body = And(tuple(literals))
        phis = [substitute_constant(body, var, name, self.signature) for name in names]
        return Grouping(var, literals, planes, unaries, names, phis, curve_empty)

    def count_curve(self, grouping: Grouping, e: int) -> Formula:
        """
        Formule sans quantificateur pour {x' : au moins e valeurs y avec E(x', y)}

        Une variable partenaire : atome fini, ou négation d'un atome fini pour
        un ensemble cofini. Plusieurs : atome d'arité |x'| porté par une
        composante à liaisons munie de la condition de fibre.
        """
        if e <= 0:
            return TRUE
        if grouping.curve_empty:
            return FALSE
        if not grouping.planes:
            return TRUE
        key = (grouping.var, str(e), *sorted(to_text(lit) for lit in grouping.literals))
        cached = self._count_cache.get(key)
        if cached is not None:
            return cached
        partners = grouping.partners
        conjuncts = [p.conjunct(partners.index(p.other)) for p in grouping.planes]
        excluded = [self.constant(c) for c in grouping.constants]
        projection = eliminate_variable(conjuncts, len(partners), excluded, e, self.seed)
        if len(partners) == 1:
            cofinite, values = projection.as_unary()
            if cofinite:
                result = simplify(Not(self.unary_formula(False, values, partners[0])))
            else:
                result = self.unary_formula(False, values, partners[0])
        elif projection.is_empty():
            result = FALSE
        else:
            result = Atom(self.register_curve(projection, "proj"), tuple(partners))
        self._count_cache[key] = result
        self.logger.debug("Courbe de comptage", {"e": e, "partners": len(partners), "result": to_text(result)})
        return result

    def infinite_locus(self, literal: Formula, var: str) -> List[str]:
        """Constantes r de la variable partenaire avec une infinité de y"""
        classified = self.classify(literal, var)
        if not isinstance(classified, PlaneLiteral):
            return []
        return [self.register_constant(v, "r") for v in vertical_locus(classified.poly)]

    def infinite_condition(self, literal: Formula, var: str) -> Formula:
        """Condition sans var pour que le littéral positif ait une infinité de solutions en var"""
        classified = self.classify(literal, var)
        if isinstance(classified, UnaryLiteral):
            return TRUE if classified.cofinite else FALSE
        names = self.infinite_locus(literal, var)
        return simplify(Or(tuple(Equals(classified.other, r) for r in names)))

    def uniform_bound(self, var: str, literals: Sequence[Formula]) -> int:
        """Majorant des fibres finies de la conjonction (maximum des degrés en y)"""
        bound = 0
        for lit in literals:
            classified = self.classify(lit, var)
            if isinstance(classified, PlaneLiteral):
                bound = max(bound, degree_in(classified.poly, FIBER))
            elif not classified.cofinite:
                bound = max(bound, len(classified.values))
        return bound

    def register_section(self, atom: Atom, fixed: Dict[int, str]) -> Formula:
        """Atome obtenu en fixant des arguments à des constantes"""
        curve = self.curve(atom.symbol)
        values = {i: self.constant(name) for i, name in fixed.items()}
        free = [i for i in range(curve.arity) if i not in values]
        if not free:
            return TRUE if curve.contains([values[i] for i in range(curve.arity)]) else FALSE
        if len(free) == 1:
            cofinite, roots = curve.section(values, free[0])
            return self.unary_formula(cofinite, roots, atom.args[free[0]])
        section = CurveSet(len(free), [SectionComponent(curve, values)])
        name = self.register_curve(section, "sec")
        return Atom(name, tuple(atom.args[i] for i in free))

    # -- audit ----------------------------------------------------------

    def audit_uniform_bound(self, var: str, literals: Sequence[Formula],
                            points: Optional[Sequence[Mapping[str, AlgebraicNumber]]] = None,
                            samples: int = 8) -> Optional[Dict[str, Any]]:
        """
        Cherche une fibre finie dépassant la borne ; renvoie le témoin éventuel

        Sans points fournis, les variables partenaires parcourent les
        constantes enregistrées puis des rationnels tirés de la graine.
        """
        bound = self.uniform_bound(var, literals)
        classified = [self.classify(lit, var) for lit in literals]
        planes = [c for c in classified if isinstance(c, PlaneLiteral)]
        if not planes or len(planes) != len(classified):
            return None
        partners = list(dict.fromkeys(p.other for p in planes))
        if points is None:
            points = self.partner_points(partners, samples)
        conjuncts = [p.conjunct(partners.index(p.other)) for p in planes]
        for point in points:
            count = fiber_count_at(conjuncts, [point[v] for v in partners])
            if count != INFINITE and count > bound:
                return {"bound": bound, "count": count, "point": {v: point[v].to_text() for v in partners}}
        return None

    def partner_points(self, partners: Sequence[str], samples: int) -> List[Dict[str, AlgebraicNumber]]:
        """Constantes de l'oracle sur chaque partenaire, puis points rationnels aléatoires"""
        rng = np.random.default_rng(self.seed)
        points = [{v: value for v in partners} for value in self.constants.values()]
        for _ in range(samples):
            points.append({v: AlgebraicNumber.rational(random_rational(rng)) for v in partners})
        return points

    def to_dict(self) -> Dict[str, Any]:
        return {
            "symbols": [
                {"name": name, "arity": curve.arity, "curve": curve.to_dict()} for name, curve in self.curves.items()
            ],
            "constants": {name: value.to_text() for name, value in self.constants.items()},
        }


def require_oracle_symbols(f: Formula, oracle: CurveOracle) -> None:
    """Vérifie que chaque atome de f est porté par une courbe de l'oracle"""
    for atom in atoms(f):
        if atom.symbol not in oracle.curves:
            raise OracleError(f"Symbole sans courbe dans l'oracle: {atom.symbol}")
