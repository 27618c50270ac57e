#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Géométrie des courbes
© 2025 - Licence Apache 2.0

Ensembles constructibles de dimension <= 1 de l'espace affine : courbes
planes (éventuellement épointées), droite affine, composantes à liaisons
avec condition de fibre exacte, sections et ensembles finis de points
algébriques. Appartenance exacte, échantillonnage reproductible, élimination
d'une variable et comptage des fibres.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy import Poly, Symbol

from .algebra import (
    coeff_gcd_in,
    coefficients_in,
    degree_in,
    discriminant,
    format_poly,
    parse_poly,
    positional_gens,
    resultant,
    squarefree,
    to_poly,
)
from .algebraic import (
    AlgebraicNumber,
    alg_equal,
    contains_value,
    distinct,
    specialized_roots,
    vanishes_at,
)
from .errors import OracleError, SamplingError, UnsupportedShapeError
from .logger import get_logger

# Générateurs canoniques d'un conjoint (paramètre, variable éliminée)
PARAM = Symbol("x_")
FIBER = Symbol("y_")

INFINITE = math.inf

Point = Tuple[AlgebraicNumber, ...]

logger = get_logger("Curves")


def random_rational(rng: np.random.Generator, bound: int = 24, max_den: int = 6) -> Fraction:
    """Rationnel aléatoire de petite hauteur"""
    return Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, max_den + 1)))


def coordinate_from_json(value: Any) -> AlgebraicNumber:
    """Coordonnée "1/2", "root(z^2 - 2, 0)" ou {"minpoly": ..., "root": i}"""
    if isinstance(value, dict):
        return AlgebraicNumber.from_text(f"root({value['minpoly']}, {int(value['root'])})")
    return AlgebraicNumber.from_text(value)


def same_point(p: Sequence[AlgebraicNumber], q: Sequence[AlgebraicNumber]) -> bool:
    return len(p) == len(q) and all(alg_equal(a, b) for a, b in zip(p, q))


# ---------------------------------------------------------------------------
# Ensembles finis
# ---------------------------------------------------------------------------


@dataclass
class FinitePointSet:
    """Points algébriques deux à deux distincts"""

    arity: int
    points: List[Point] = field(default_factory=list)

    def __post_init__(self):
        kept: List[Point] = []
        for pt in self.points:
            pt = tuple(pt)
            if len(pt) != self.arity:
                raise OracleError(f"Point d'arité {len(pt)} dans un ensemble d'arité {self.arity}")
            if not any(same_point(pt, k) for k in kept):
                kept.append(pt)
        self.points = kept

    def contains(self, pt: Sequence[AlgebraicNumber]) -> bool:
        return any(same_point(pt, k) for k in self.points)

    def __len__(self) -> int:
        return len(self.points)

    def to_dict(self) -> List[List[str]]:
        return [[c.to_text() for c in pt] for pt in self.points]

    @classmethod
    def from_list(cls, arity: int, data: Sequence[Sequence[Any]]) -> "FinitePointSet":
        return cls(arity, [tuple(coordinate_from_json(c) for c in pt) for pt in data])


# ---------------------------------------------------------------------------
# Conjoints et comptage des fibres
# ---------------------------------------------------------------------------


@dataclass
class FiberConjunct:
    """
    Courbe plane p(x_index, y) = 0 privée de points (x, y), vue au-dessus de
    la coordonnée index d'un tuple cible
    """

    index: int
    poly: Poly
    minus: List[Tuple[AlgebraicNumber, AlgebraicNumber]] = field(default_factory=list)

    def holds(self, x: AlgebraicNumber, y: AlgebraicNumber) -> bool:
        if not vanishes_at(self.poly, {PARAM: x, FIBER: y}):
            return False
        return not any(alg_equal(x, a) and alg_equal(y, b) for a, b in self.minus)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "poly": format_poly(self.poly),
            "minus": [[a.to_text(), b.to_text()] for a, b in self.minus],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FiberConjunct":
        return cls(
            int(data["index"]),
            parse_poly(data["poly"], (PARAM, FIBER)),
            [(coordinate_from_json(a), coordinate_from_json(b)) for a, b in data.get("minus", [])],
        )


def fiber_roots(conjuncts: Sequence[FiberConjunct], point: Sequence[AlgebraicNumber],
                excluded: Sequence[AlgebraicNumber] = ()) -> Optional[List[AlgebraicNumber]]:
    """
    Valeurs de y hors de excluded satisfaisant tous les conjoints au point

    Returns:
        None si la fibre est infinie, sinon la liste exacte des y
    """
    candidates: Optional[List[AlgebraicNumber]] = None
    for c in conjuncts:
        roots = specialized_roots(c.poly, FIBER, {PARAM: point[c.index]})
        if roots is not None:
            candidates = roots
            break
    if candidates is None:
        return None
    kept = []
    for y in candidates:
        if contains_value(excluded, y):
            continue
        if all(c.holds(point[c.index], y) for c in conjuncts):
            kept.append(y)
    return distinct(kept)


def fiber_count_at(conjuncts: Sequence[FiberConjunct], point: Sequence[AlgebraicNumber],
                   excluded: Sequence[AlgebraicNumber] = ()) -> Union[int, float]:
    """
    Nombre exact de y distincts avec tous les conjoints vérifiés au point

    Returns:
        Entier, ou INFINITE si toutes les spécialisations sont identiquement nulles
    """
    roots = fiber_roots(conjuncts, point, excluded)
    if roots is None:
        return INFINITE
    return len(roots)


@dataclass
class FiberCondition:
    """Au moins threshold valeurs de y (hors excluded) au-dessus du point"""

    conjuncts: List[FiberConjunct]
    excluded: List[AlgebraicNumber] = field(default_factory=list)
    threshold: int = 1

    def count(self, point: Sequence[AlgebraicNumber]) -> Union[int, float]:
        return fiber_count_at(self.conjuncts, point, self.excluded)

    def holds(self, point: Sequence[AlgebraicNumber]) -> bool:
        return self.count(point) >= self.threshold

    def to_dict(self) -> Dict[str, Any]:
        return {
            "threshold": self.threshold,
            "conjuncts": [c.to_dict() for c in self.conjuncts],
            "excluded": [q.to_text() for q in self.excluded],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FiberCondition":
        return cls(
            [FiberConjunct.from_dict(c) for c in data["conjuncts"]],
            [coordinate_from_json(q) for q in data.get("excluded", [])],
            int(data.get("threshold", 1)),
        )


def split_contents(poly: Poly) -> Tuple[Poly, Poly, Poly]:
    """
    p(x, y) = c(x) d(y) h(x, y) avec h sans facteur ne dépendant que d'une variable

    Returns:
        (c, d, h) ; c en PARAM, d en FIBER, h en (PARAM, FIBER)
    """
    p = to_poly(poly.as_expr(), PARAM, FIBER)
    c = coeff_gcd_in(p, FIBER)
    rest = _exact_quotient(p, c)
    d = coeff_gcd_in(rest, PARAM)
    core = _exact_quotient(rest, d)
    return to_poly(c.as_expr(), PARAM), to_poly(d.as_expr(), FIBER), core


def _exact_quotient(p: Poly, q: Poly) -> Poly:
    quotient, remainder = sympy.div(p.as_expr(), q.as_expr(), PARAM, FIBER, domain=sympy.QQ)
    if sympy.expand(remainder) != 0:
        raise OracleError("Division exacte attendue")
    return to_poly(sympy.expand(quotient), PARAM, FIBER)


def _fiber_degree(p: Poly) -> int:
    return degree_in(to_poly(p.as_expr(), PARAM, FIBER), FIBER)


def horizontal_locus(poly: Poly) -> List[AlgebraicNumber]:
    """Valeurs de y au-dessus desquelles la fibre en x est infinie"""
    _, d, _ = split_contents(poly)
    if d.total_degree() <= 0:
        return []
    return AlgebraicNumber.roots_of(d)


def vertical_locus(poly: Poly) -> List[AlgebraicNumber]:
    """Valeurs de x au-dessus desquelles la fibre en y est infinie"""
    c, _, _ = split_contents(poly)
    if c.total_degree() <= 0:
        return []
    return AlgebraicNumber.roots_of(c)


def with_horizontal_loci(conjuncts: Sequence[FiberConjunct],
                         excluded: Sequence[AlgebraicNumber]) -> List[AlgebraicNumber]:
    """Valeurs exclues augmentées des droites horizontales contenues dans les conjoints"""
    values = list(excluded)
    for c in conjuncts:
        values.extend(horizontal_locus(c.poly))
    return distinct(values)


def infinite_fiber_locus(curve: "PlaneCurve", y_index: int = 1) -> FinitePointSet:
    """Valeurs de l'autre coordonnée où la fibre de la coordonnée y_index est infinie"""
    return FinitePointSet(1, [(x,) for x in vertical_locus(curve.view(y_index))])


def _roots_in_param(p: Poly) -> List[AlgebraicNumber]:
    p = to_poly(p.as_expr(), PARAM)
    if p.is_zero or p.degree() <= 0:
        return []
    return AlgebraicNumber.roots_of(p)


def _substitute_fiber(p: Poly, q: AlgebraicNumber) -> Poly:
    """Polynôme en x dont les racines sont les x avec p(x, q) = 0"""
    if q.is_rational:
        v = q.rational_value
        return to_poly(sympy.expand(p.as_expr().subs(FIBER, sympy.Rational(v.numerator, v.denominator))), PARAM)
    minimal = q.minimal().minpoly
    return to_poly(
        sympy.expand(sympy.resultant(minimal.as_expr().subs(minimal.gens[0], FIBER), p.as_expr(), FIBER)), PARAM
    )


def _common_root_locus(cofactors: Sequence[Poly]) -> Optional[Poly]:
    """Polynôme en x nul partout où les cofacteurs ont une racine commune en y"""
    if len(cofactors) < 2 or any(_fiber_degree(k) < 1 for k in cofactors):
        return None
    first, others = cofactors[0], cofactors[1:]
    for base in range(1, 12):
        combo = sum((base ** i) * k.as_expr() for i, k in enumerate(others))
        combo_poly = to_poly(sympy.expand(combo), PARAM, FIBER)
        if _fiber_degree(combo_poly) < 1:
            continue
        res = resultant(first, combo_poly, FIBER)
        if not res.is_zero:
            return res
    raise OracleError("Résultant des cofacteurs identiquement nul")


def generic_fiber_data(
    conjuncts: Sequence[FiberConjunct],
    excluded: Sequence[AlgebraicNumber] = (),
    seed: int = 20240601,
    retries: int = 3,
) -> Tuple[int, List[AlgebraicNumber]]:
    """
    Cardinal générique des fibres et paramètres exceptionnels

    Tous les conjoints portent sur la même coordonnée. En dehors des points
    exceptionnels (contenus verticaux, coefficient dominant et discriminant
    du pgcd des parties primitives, racines communes des cofacteurs, valeurs
    exclues, points retirés), le cardinal de la fibre vaut generic_count.

    Returns:
        (generic_count, exceptional)
    """
    excluded = with_horizontal_loci(conjuncts, excluded)
    splits = [split_contents(c.poly) for c in conjuncts]
    cores = [h for _, _, h in splits]
    gcd_core = cores[0]
    for h in cores[1:]:
        gcd_core = to_poly(sympy.gcd(gcd_core.as_expr(), h.as_expr()), PARAM, FIBER)

    exceptional_polys: List[Poly] = [c for c, _, _ in splits if c.total_degree() > 0]
    generic_count = 0
    if _fiber_degree(gcd_core) >= 1:
        sqf = squarefree(gcd_core)
        generic_count = _fiber_degree(sqf)
        exceptional_polys.append(coefficients_in(sqf, FIBER)[0])
        if generic_count >= 2:
            exceptional_polys.append(discriminant(sqf, FIBER))
        for q in excluded:
            exceptional_polys.append(_substitute_fiber(sqf, q))
        cofactors = [_exact_quotient(h, gcd_core) for h in cores]
    else:
        cofactors = cores
    common = _common_root_locus(cofactors)
    if common is not None:
        exceptional_polys.append(common)

    exceptional: List[AlgebraicNumber] = []
    for p in exceptional_polys:
        exceptional.extend(_roots_in_param(p))
    for c in conjuncts:
        exceptional.extend(a for a, _ in c.minus)
    exceptional = distinct(exceptional)

    rng = np.random.default_rng(seed)
    checked = 0
    attempts = 0
    while checked < retries and attempts < 50:
        attempts += 1
        x0 = AlgebraicNumber.rational(random_rational(rng))
        if contains_value(exceptional, x0):
            continue
        count = fiber_count_at(conjuncts, [x0], excluded)
        if count != generic_count:
            raise OracleError(f"Comptage générique instable: {count} != {generic_count}")
        checked += 1
    logger.debug("Données de fibre générique", {"generic": generic_count, "exceptional": len(exceptional)})
    return generic_count, exceptional


# ---------------------------------------------------------------------------
# Composantes
# ---------------------------------------------------------------------------


class Component:
    """Morceau de dimension <= 1 d'un CurveSet"""

    arity: int

    def contains(self, pt: Sequence[AlgebraicNumber]) -> bool:
        raise NotImplementedError

    def fiber(self, fixed: Dict[int, AlgebraicNumber], free: int) -> Optional[List[AlgebraicNumber]]:
        """Valeurs de la coordonnée free (None : toutes) avec les autres fixées"""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator) -> Optional[Point]:
        raise NotImplementedError

    def to_dict(self) -> Dict[str, Any]:
        raise NotImplementedError


@dataclass
class AffineLine(Component):
    """La droite affine entière (ensemble unaire cofini)"""

    arity: int = 1

    def contains(self, pt: Sequence[AlgebraicNumber]) -> bool:
        return True

    def fiber(self, fixed: Dict[int, AlgebraicNumber], free: int) -> Optional[List[AlgebraicNumber]]:
        return None

    def sample(self, rng: np.random.Generator) -> Optional[Point]:
        return (AlgebraicNumber.rational(random_rational(rng)),)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "line"}


class PlaneCurve(Component):
    """Lieu p(x0, x1) = 0, partie sans carré stockée"""

    arity = 2

    def __init__(self, poly: Poly):
        gens = positional_gens(2)
        poly = to_poly(poly.as_expr(), *gens)
        if poly.is_zero:
            raise OracleError("Courbe plane définie par le polynôme nul")
        self.poly = squarefree(poly)
        self.gens = gens

    def contains(self, pt: Sequence[AlgebraicNumber]) -> bool:
        return vanishes_at(self.poly, dict(zip(self.gens, pt)))

    def fiber(self, fixed: Dict[int, AlgebraicNumber], free: int) -> Optional[List[AlgebraicNumber]]:
        (index, value), = fixed.items()
        return specialized_roots(self.poly, self.gens[free], {self.gens[index]: value})

    def view(self, y_index: int) -> Poly:
        """Polynôme en (PARAM, FIBER), la coordonnée y_index jouant le rôle de y"""
        x_gen, y_gen = self.gens[1 - y_index], self.gens[y_index]
        return to_poly(self.poly.as_expr().subs({x_gen: PARAM, y_gen: FIBER}, simultaneous=True), PARAM, FIBER)

    def sample(self, rng: np.random.Generator) -> Optional[Point]:
        x0, x1 = self.gens
        if self.poly.degree(x1) >= 1:
            a = AlgebraicNumber.rational(random_rational(rng))
            roots = specialized_roots(self.poly, x1, {x0: a})
            if roots is None:
                return a, AlgebraicNumber.rational(random_rational(rng))
            if not roots:
                return None
            return a, roots[int(rng.integers(len(roots)))]
        roots = AlgebraicNumber.roots_of(to_poly(self.poly.as_expr(), x0))
        if not roots:
            return None
        return roots[int(rng.integers(len(roots)))], AlgebraicNumber.rational(random_rational(rng))

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "plane", "polys": [format_poly(self.poly)]}

    def __repr__(self) -> str:
        return f"PlaneCurve({format_poly(self.poly)})"


class LinkComponent(Component):
    """
    Points dont chaque coordonnée j != param est liée au paramètre par
    L_j(x_param, x_j) = 0 (degré >= 1 en x_j : fibres finies), avec une
    condition de fibre optionnelle qui rend l'appartenance exacte
    """

    def __init__(self, arity: int, param: int, links: Dict[int, Poly],
                 fiber_condition: Optional[FiberCondition] = None):
        self.arity = arity
        self.param = param
        self.gens = positional_gens(arity)
        self.links: Dict[int, Poly] = {}
        for j, link in links.items():
            link = to_poly(link.as_expr(), self.gens[param], self.gens[j])
            if j == param or degree_in(link, self.gens[j]) < 1:
                raise OracleError(f"Liaison invalide pour la coordonnée {j}")
            self.links[j] = link
        if set(self.links) != set(range(arity)) - {param}:
            raise OracleError("Chaque coordonnée hors paramètre doit être liée")
        self.fiber_condition = fiber_condition

    def _links_hold(self, pt: Sequence[AlgebraicNumber]) -> bool:
        k = self.param
        return all(
            vanishes_at(link, {self.gens[k]: pt[k], self.gens[j]: pt[j]}) for j, link in self.links.items()
        )

    def contains(self, pt: Sequence[AlgebraicNumber]) -> bool:
        if not self._links_hold(pt):
            return False
        return self.fiber_condition is None or self.fiber_condition.holds(pt)

    def fiber(self, fixed: Dict[int, AlgebraicNumber], free: int) -> Optional[List[AlgebraicNumber]]:
        k = self.param
        if free == k:
            candidates = None
            for j, link in self.links.items():
                roots = specialized_roots(link, self.gens[k], {self.gens[j]: fixed[j]})
                if roots is not None:
                    candidates = roots
                    break
        else:
            candidates = specialized_roots(self.links[free], self.gens[free], {self.gens[k]: fixed[k]})
        if candidates is None:
            raise UnsupportedShapeError("Fibre infinie d'une composante à liaisons")
        kept = []
        for value in candidates:
            pt = [fixed.get(i) for i in range(self.arity)]
            pt[free] = value
            if self.contains(pt):
                kept.append(value)
        return kept

    def sample(self, rng: np.random.Generator) -> Optional[Point]:
        if self.fiber_condition is not None:
            return self._sample_through_witness(rng)
        k = self.param
        a = AlgebraicNumber.rational(random_rational(rng))
        pt: List[Optional[AlgebraicNumber]] = [None] * self.arity
        pt[k] = a
        for j, link in self.links.items():
            roots = specialized_roots(link, self.gens[j], {self.gens[k]: a})
            if not roots:
                return None
            pt[j] = roots[int(rng.integers(len(roots)))]
        return tuple(pt)

    def _sample_through_witness(self, rng: np.random.Generator) -> Optional[Point]:
        """Tire y rationnel, puis chaque coordonnée dans la fibre horizontale"""
        condition = self.fiber_condition
        y0 = AlgebraicNumber.rational(random_rational(rng))
        if contains_value(condition.excluded, y0):
            return None
        pt: List[Optional[AlgebraicNumber]] = [None] * self.arity
        for i in range(self.arity):
            group = [c for c in condition.conjuncts if c.index == i]
            roots = None
            for c in group:
                roots = specialized_roots(c.poly, PARAM, {FIBER: y0})
                if roots is not None:
                    break
            if roots is None:
                roots = [AlgebraicNumber.rational(random_rational(rng))]
            roots = [x for x in roots if all(c.holds(x, y0) for c in group)]
            if not roots:
                return None
            pt[i] = roots[int(rng.integers(len(roots)))]
        return tuple(pt)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "kind": "links",
            "arity": self.arity,
            "param_index": self.param,
            "polys": {str(j): format_poly(link) for j, link in sorted(self.links.items())},
        }
        if self.fiber_condition is not None:
            data["fiber"] = self.fiber_condition.to_dict()
        return data


class SectionComponent(Component):
    """Section d'un CurveSet par fixation de coordonnées à des constantes"""

    def __init__(self, base: "CurveSet", fixed: Dict[int, AlgebraicNumber]):
        self.base = base
        self.fixed = dict(fixed)
        self.free = [i for i in range(base.arity) if i not in self.fixed]
        self.arity = len(self.free)

    def _lift(self, pt: Sequence[AlgebraicNumber]) -> List[AlgebraicNumber]:
        full: List[Optional[AlgebraicNumber]] = [None] * self.base.arity
        for i, v in self.fixed.items():
            full[i] = v
        for i, v in zip(self.free, pt):
            full[i] = v
        return full

    def contains(self, pt: Sequence[AlgebraicNumber]) -> bool:
        return self.base.contains(self._lift(pt))

    def fiber(self, fixed: Dict[int, AlgebraicNumber], free: int) -> Optional[List[AlgebraicNumber]]:
        merged = dict(self.fixed)
        for i, v in fixed.items():
            merged[self.free[i]] = v
        cofinite, values = self.base.section(merged, self.free[free])
        if cofinite:
            raise UnsupportedShapeError("Section cofinie d'arité >= 2")
        return values

    def sample(self, rng: np.random.Generator) -> Optional[Point]:
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "section",
            "base": self.base.to_dict(),
            "fixed": {str(i): v.to_text() for i, v in sorted(self.fixed.items())},
        }


# ---------------------------------------------------------------------------
# CurveSet
# ---------------------------------------------------------------------------


class CurveSet:
    """Union de composantes et de points, privée de points (retirés en dernier)"""

    def __init__(
        self,
        arity: int,
        components: Optional[List[Component]] = None,
        extra: Optional[FinitePointSet] = None,
        minus: Optional[FinitePointSet] = None,
    ):
        self.arity = arity
        self.components = list(components or [])
        for comp in self.components:
            if comp.arity != arity:
                raise OracleError(f"Composante d'arité {comp.arity} dans un ensemble d'arité {arity}")
        self.extra = extra or FinitePointSet(arity)
        self.minus = minus or FinitePointSet(arity)

    # -- constructeurs --------------------------------------------------

    @classmethod
    def plane(cls, poly: Poly, minus: Sequence[Point] = ()) -> "CurveSet":
        return cls(2, [PlaneCurve(poly)], minus=FinitePointSet(2, list(minus)))

    @classmethod
    def points(cls, arity: int, points: Sequence[Point]) -> "CurveSet":
        return cls(arity, [], extra=FinitePointSet(arity, list(points)))

    @classmethod
    def cofinite(cls, excluded: Sequence[AlgebraicNumber] = ()) -> "CurveSet":
        return cls(1, [AffineLine()], minus=FinitePointSet(1, [(v,) for v in excluded]))

    @classmethod
    def finite_unary(cls, values: Sequence[AlgebraicNumber]) -> "CurveSet":
        return cls.points(1, [(v,) for v in values])

    # -- appartenance ---------------------------------------------------

    def contains(self, pt: Sequence[AlgebraicNumber]) -> bool:
        """Décision exacte de l'appartenance"""
        if len(pt) != self.arity:
            raise OracleError(f"Point d'arité {len(pt)} pour un ensemble d'arité {self.arity}")
        if self.minus.contains(pt):
            return False
        if self.extra.contains(pt):
            return True
        return any(comp.contains(pt) for comp in self.components)

    def section(self, fixed: Dict[int, AlgebraicNumber], free: int) -> Tuple[bool, List[AlgebraicNumber]]:
        """
        Fibre de la coordonnée free, toutes les autres fixées

        Returns:
            (cofinite, values) : ensemble cofini privé de values, ou ensemble fini values
        """
        if set(fixed) | {free} != set(range(self.arity)) or free in fixed:
            raise OracleError("Section: toutes les coordonnées sauf une doivent être fixées")

        def matches(pt: Point) -> bool:
            return all(alg_equal(pt[i], v) for i, v in fixed.items())

        removed = [pt[free] for pt in self.minus.points if matches(pt)]
        values: List[AlgebraicNumber] = []
        for comp in self.components:
            roots = comp.fiber(fixed, free)
            if roots is None:
                return True, distinct(removed)
            values.extend(roots)
        values.extend(pt[free] for pt in self.extra.points if matches(pt))
        return False, [v for v in distinct(values) if not contains_value(removed, v)]

    # -- classification -------------------------------------------------

    def as_plane(self) -> Optional[Tuple[PlaneCurve, List[Point]]]:
        """Courbe plane épointée, ou None"""
        if self.arity != 2 or len(self.components) != 1 or self.extra.points:
            return None
        comp = self.components[0]
        if not isinstance(comp, PlaneCurve):
            return None
        return comp, list(self.minus.points)

    def as_unary(self) -> Optional[Tuple[bool, List[AlgebraicNumber]]]:
        """(cofinite, values) pour un ensemble unaire"""
        if self.arity != 1:
            return None
        if any(isinstance(c, AffineLine) for c in self.components):
            return True, [pt[0] for pt in self.minus.points]
        if self.components:
            return None
        return False, [pt[0] for pt in self.extra.points if not self.minus.contains(pt)]

    def is_empty(self) -> bool:
        return not self.components and not self.extra.points

    # -- échantillonnage ------------------------------------------------

    def sample_points(self, count: int, seed: int) -> List[Point]:
        """
        Points certifiés de l'ensemble, reproductibles à graine fixée

        Raises:
            SamplingError: aucun point obtenu (ensemble vide ou composantes vides
                au-dessus des paramètres tirés)
        """
        rng = np.random.default_rng(seed)
        sources: List[Any] = list(self.components)
        extra = [pt for pt in self.extra.points if not self.minus.contains(pt)]
        if extra:
            sources.append("extra")
        if not sources or count <= 0:
            if count > 0:
                raise SamplingError("Échantillonnage d'un ensemble vide")
            return []
        points: List[Point] = []
        attempts = 0
        while len(points) < count and attempts < 20 * count + 20:
            source = sources[attempts % len(sources)]
            attempts += 1
            if source == "extra":
                points.append(extra[int(rng.integers(len(extra)))])
                continue
            pt = source.sample(rng)
            if pt is not None and self.contains(pt):
                points.append(tuple(pt))
        if not points:
            raise SamplingError("Aucun point obtenu sur les paramètres tirés")
        return points

    def dimension_audit(self, seed: int = 20240601, samples: int = 64) -> bool:
        """Fibres finies au-dessus de paramètres aléatoires, pour chaque composante"""
        rng = np.random.default_rng(seed)
        for comp in self.components:
            if isinstance(comp, PlaneCurve):
                for _ in range(samples):
                    a = AlgebraicNumber.rational(random_rational(rng))
                    if comp.fiber({0: a}, 1) is None and comp.fiber({1: a}, 0) is None:
                        return False
            elif isinstance(comp, LinkComponent):
                for _ in range(samples):
                    a = AlgebraicNumber.rational(random_rational(rng))
                    for j, link in comp.links.items():
                        if specialized_roots(link, comp.gens[j], {comp.gens[comp.param]: a}) is None:
                            return False
        return True

    # -- sérialisation --------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"arity": self.arity}
        if len(self.components) == 1 and not self.extra.points:
            data.update(self.components[0].to_dict())
        elif not self.components:
            data["kind"] = "points"
            data["points"] = self.extra.to_dict()
        else:
            data["kind"] = "union"
            data["components"] = [c.to_dict() for c in self.components]
            if self.extra.points:
                data["points"] = self.extra.to_dict()
        if self.minus.points:
            data["minus"] = self.minus.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CurveSet":
        """
        Lit {kind: "plane"|"links"|"points"|"line"|"union", arity, ...}
        """
        kind = data.get("kind")
        arity = int(data.get("arity", 2 if kind == "plane" else 1))
        minus = FinitePointSet.from_list(arity, data.get("minus", []))
        extra = FinitePointSet.from_list(arity, data.get("points", []))
        if kind == "points":
            return cls(arity, [], extra=extra, minus=minus)
        if kind == "union":
            parts = [cls.from_dict({"arity": arity, **c}) for c in data["components"]]
            components = [c for part in parts for c in part.components]
            return cls(arity, components, extra=extra, minus=minus)
        return cls(arity, [_component_from_dict(arity, data)], extra=extra, minus=minus)

    def __repr__(self) -> str:
        return f"CurveSet(arity={self.arity}, components={self.components}, extra={len(self.extra)}, minus={len(self.minus)})"


def _component_from_dict(arity: int, data: Dict[str, Any]) -> Component:
    kind = data.get("kind")
    gens = positional_gens(arity)
    if kind == "plane":
        if arity != 2:
            raise OracleError("Une courbe plane est d'arité 2")
        return PlaneCurve(parse_poly(data["polys"][0], gens))
    if kind == "line":
        if arity != 1:
            raise OracleError("La droite affine est d'arité 1")
        return AffineLine()
    if kind == "links":
        param = int(data["param_index"])
        polys = data["polys"]
        if isinstance(polys, dict):
            links = {int(j): parse_poly(text, gens) for j, text in polys.items()}
        else:
            others = [j for j in range(arity) if j != param]
            links = {j: parse_poly(text, gens) for j, text in zip(others, polys)}
        fiber = FiberCondition.from_dict(data["fiber"]) if "fiber" in data else None
        return LinkComponent(arity, param, links, fiber)
    raise OracleError(f"Type de courbe inconnu: {kind}")


# ---------------------------------------------------------------------------
# Projections
# ---------------------------------------------------------------------------


def _is_monic_in_fiber(p: Poly) -> bool:
    lead = coefficients_in(to_poly(p.as_expr(), PARAM, FIBER), FIBER)[0]
    return lead.total_degree() <= 0 and not lead.is_zero


def count_projection(
    conjuncts: Sequence[FiberConjunct],
    excluded: Sequence[AlgebraicNumber] = (),
    threshold: int = 1,
    seed: int = 20240601,
) -> CurveSet:
    """
    {x : au moins threshold valeurs y hors excluded} pour une seule coordonnée

    Ensemble cofini si le cardinal générique atteint threshold, fini sinon.
    """
    excluded = with_horizontal_loci(conjuncts, excluded)
    generic, exceptional = generic_fiber_data(conjuncts, excluded, seed)
    counts = [(x0, fiber_count_at(conjuncts, [x0], excluded)) for x0 in exceptional]
    if generic >= threshold:
        return CurveSet.cofinite([x0 for x0, n in counts if n < threshold])
    return CurveSet.finite_unary([x0 for x0, n in counts if n >= threshold])


def eliminate_variable(
    conjuncts: Sequence[FiberConjunct],
    arity: int,
    excluded: Sequence[AlgebraicNumber] = (),
    threshold: int = 1,
    seed: int = 20240601,
) -> CurveSet:
    """
    Projection de la conjonction des courbes planes sur les coordonnées cibles

    Args:
        conjuncts: Courbes p_i(x_index, y), chaque coordonnée cible liée à y
        arity: Nombre de coordonnées cibles
        excluded: Valeurs de y interdites
        threshold: Nombre minimal de y requis

    Returns:
        Ensemble exact ; pour au moins deux coordonnées, une composante à
        liaisons (résultants en y à travers un paramètre) munie de la condition
        de fibre, ou une courbe plane exacte pour deux conjoints unitaires en y

    Raises:
        OracleError: conjoint identiquement nul en y
        UnsupportedShapeError: aucune coordonnée paramétrable
    """
    conjuncts = list(conjuncts)
    if not conjuncts:
        raise OracleError("Projection sans conjoint")
    if {c.index for c in conjuncts} != set(range(arity)):
        raise OracleError("Chaque coordonnée cible doit être liée à y")
    for c in conjuncts:
        if to_poly(c.poly.as_expr(), PARAM, FIBER).is_zero:
            raise OracleError("Conjoint identiquement nul")
    excluded = with_horizontal_loci(conjuncts, excluded)
    if arity == 1:
        return count_projection(conjuncts, excluded, threshold, seed)

    splits = [split_contents(c.poly) for c in conjuncts]
    for (c, _, h), conj in zip(splits, conjuncts):
        if c.total_degree() <= 0 and h.total_degree() <= 0:
            # seul un facteur en y : aucune solution hors des valeurs exclues
            return CurveSet(arity)

    if (
        arity == 2
        and threshold == 1
        and not excluded
        and len(conjuncts) == 2
        and {c.index for c in conjuncts} == {0, 1}
        and not any(c.minus for c in conjuncts)
        and all(_is_monic_in_fiber(c.poly) and _fiber_degree(c.poly) >= 1 for c in conjuncts)
    ):
        gens = positional_gens(2)
        first, second = sorted(conjuncts, key=lambda c: c.index)
        p0 = to_poly(first.poly.as_expr().subs(PARAM, gens[0]), gens[0], FIBER)
        p1 = to_poly(second.poly.as_expr().subs(PARAM, gens[1]), gens[1], FIBER)
        return CurveSet(2, [PlaneCurve(resultant(p0, p1, FIBER))])

    param = None
    for i in range(arity):
        group = [s for s, c in zip(splits, conjuncts) if c.index == i]
        if all(cx.total_degree() <= 0 for cx, _, _ in group) and any(_fiber_degree(h) >= 1 for _, _, h in group):
            param = i
            break
    if param is None:
        raise UnsupportedShapeError("Aucune coordonnée sans droite verticale pour paramétrer la projection")

    gens = positional_gens(arity)
    base_core = next(h for (cx, _, h), c in zip(splits, conjuncts) if c.index == param and _fiber_degree(h) >= 1)
    base = to_poly(base_core.as_expr().subs(PARAM, gens[param]), gens[param], FIBER)
    links: Dict[int, Poly] = {}
    for j in range(arity):
        if j == param:
            continue
        for (cx, _, h), c in zip(splits, conjuncts):
            if c.index != j:
                continue
            factor = cx.as_expr().subs(PARAM, gens[j])
            if _fiber_degree(h) >= 1:
                other = to_poly(h.as_expr().subs(PARAM, gens[j]), gens[j], FIBER)
                factor = factor * resultant(base, other, FIBER).as_expr()
            link = to_poly(sympy.expand(factor), gens[param], gens[j])
            if degree_in(link, gens[j]) >= 1:
                links[j] = link
                break
        if j not in links:
            raise OracleError(f"Aucune liaison de degré >= 1 pour la coordonnée {j}")
    condition = FiberCondition(conjuncts, list(excluded), threshold)
    return CurveSet(arity, [LinkComponent(arity, param, links, condition)])
