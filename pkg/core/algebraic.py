#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Nombres algébriques
© 2025 - Licence Apache 2.0

Un nombre algébrique est un polynôme sans facteur carré et une boule qui
isole l'une de ses racines. Les décisions (égalité, annulation d'un
polynôme en un point algébrique) sont exactes : polynômes d'élimination
par résultants, puis séparation par boules à précision croissante.
"""

import re
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

import sympy
from sympy import Poly, Symbol

from .algebra import (
    W,
    Z,
    format_poly,
    fraction_of,
    isolate_roots,
    parse_poly,
    resultant,
    squarefree,
    to_poly,
    univariate_coeffs,
)
from .balls import PRECISION_CAP_BITS, ComplexBall, horner
from .errors import AlgebraError, OracleError, PrecisionCapError

_ROOT_SYNTAX = re.compile(r"^\s*root\((?P<poly>.+),\s*(?P<index>-?\d+)\s*\)\s*$")


class AlgebraicNumber:
    """Racine isolée d'un polynôme rationnel sans facteur carré"""

    __slots__ = ("minpoly", "_box", "_boxes", "_minimal")

    def __init__(self, minpoly: Poly, box: ComplexBall):
        """
        Args:
            minpoly: Polynôme univarié en Z, sans facteur carré, unitaire
            box: Boule contenant exactement une racine de minpoly
        """
        self.minpoly = minpoly
        self._box = box
        self._boxes: Dict[int, ComplexBall] = {}
        self._minimal: Optional["AlgebraicNumber"] = None

    # -- constructeurs --------------------------------------------------

    @classmethod
    def rational(cls, q) -> "AlgebraicNumber":
        q = Fraction(q)
        return cls(to_poly(Z - sympy.Rational(q.numerator, q.denominator), Z), ComplexBall(q))

    @classmethod
    def roots_of(cls, p: Poly, precision_bits: int = 128) -> List["AlgebraicNumber"]:
        """Toutes les racines distinctes d'un polynôme univarié, triées"""
        live = [g for g in p.gens if p.degree(g) > 0]
        if not live:
            return []
        if len(live) > 1:
            raise AlgebraError(f"Polynôme non univarié: {format_poly(p)}")
        monic = squarefree(to_poly(p.as_expr().subs(live[0], Z), Z)).monic()
        if monic.degree() == 1:
            return [_linear_root(monic)]
        factors = irreducible_factors(monic)
        roots = [cls(monic, box) for box in isolate_roots(monic, precision_bits)]
        if len(factors) == 1:
            return roots
        return [_reduce(root, factors, "Racines d'un polynôme") for root in roots]

    @classmethod
    def from_text(cls, text) -> "AlgebraicNumber":
        """
        Lit "3/4", "-2" ou "root(z^2 - 2, 1)" (indice dans l'ordre des racines)
        """
        if isinstance(text, (int, Fraction)):
            return cls.rational(text)
        text = str(text).strip()
        match = _ROOT_SYNTAX.match(text)
        if not match:
            try:
                return cls.rational(Fraction(text))
            except (ValueError, ZeroDivisionError) as e:
                raise AlgebraError(f"Nombre algébrique illisible: {text!r}") from e
        roots = cls.roots_of(parse_poly(match.group("poly"), (Z,)))
        index = int(match.group("index"))
        if not 0 <= index < len(roots):
            raise AlgebraError(f"Indice de racine hors limites: {text!r}")
        return roots[index]

    # -- accès ----------------------------------------------------------

    @property
    def degree(self) -> int:
        return self.minpoly.degree()

    @property
    def is_rational(self) -> bool:
        return self.minpoly.degree() == 1

    @property
    def rational_value(self) -> Optional[Fraction]:
        if not self.is_rational:
            return None
        lead, const = (fraction_of(c) for c in self.minpoly.all_coeffs())
        return -const / lead

    @property
    def box(self) -> ComplexBall:
        return self._box

    def box_at(self, bits: int) -> ComplexBall:
        """Boule isolante de rayon <= 2^-bits"""
        if self.is_rational:
            return ComplexBall(self.rational_value)
        if self._box.rad <= Fraction(1, 1 << bits):
            return self._box
        cached = self._boxes.get(bits)
        if cached is not None:
            return cached
        work = bits
        while work <= PRECISION_CAP_BITS:
            hits = [b for b in isolate_roots(self.minpoly, work) if b.overlaps(self._box)]
            if len(hits) == 1:
                self._boxes[bits] = hits[0]
                return hits[0]
            work *= 2
        raise PrecisionCapError("Raffinement d'un nombre algébrique", PRECISION_CAP_BITS)

    def approx(self) -> complex:
        return self.box_at(53).to_complex()

    def minimal(self) -> "AlgebraicNumber":
        """Même nombre, polynôme minimal irréductible"""
        if self._minimal is not None:
            return self._minimal
        if self.is_rational:
            self._minimal = self
            return self
        factors = irreducible_factors(self.minpoly)
        self._minimal = self if len(factors) == 1 else _reduce(self, factors, "Choix du facteur minimal")
        return self._minimal

    def root_index(self, precision_bits: int = 128) -> int:
        """Rang de la racine dans l'ordre des racines de minpoly"""
        roots = isolate_roots(self.minpoly, precision_bits)
        hits = [i for i, b in enumerate(roots) if b.overlaps(self.box_at(precision_bits))]
        if len(hits) != 1:
            raise OracleError("Rang de racine ambigu")
        return hits[0]

    def to_text(self) -> str:
        if self.is_rational:
            return str(self.rational_value)
        return f"root({format_poly(self.minpoly)}, {self.root_index()})"

    def to_dict(self) -> Dict:
        return {"value": self.to_text(), "ball": self.box_at(64).to_dict()}

    def __repr__(self) -> str:
        if self.is_rational:
            return f"Alg({self.rational_value})"
        return f"Alg({format_poly(self.minpoly)} ~ {self.approx():.6g})"


def _eval_univariate(p: Poly, box: ComplexBall, bits: int) -> ComplexBall:
    return horner(univariate_coeffs(p), box, bits + 16)


def irreducible_factors(p: Poly) -> List[Poly]:
    """Facteurs irréductibles unitaires sur Q d'un polynôme en Z"""
    _, factors = p.factor_list()
    return [to_poly(f.as_expr(), Z).monic() for f, _ in factors if f.degree() > 0]


def _linear_root(p: Poly) -> AlgebraicNumber:
    lead, const = (fraction_of(c) for c in p.all_coeffs())
    return AlgebraicNumber.rational(-const / lead)


def _reduce(x: AlgebraicNumber, factors: Sequence[Poly], label: str) -> AlgebraicNumber:
    """Le facteur irréductible qui s'annule sur la boule de x ; rationnel s'il est linéaire"""
    bits = 64
    while bits <= PRECISION_CAP_BITS:
        box = x.box_at(bits)
        alive = [f for f in factors if _eval_univariate(f, box, bits).contains_zero()]
        if len(alive) == 1:
            if alive[0].degree() == 1:
                return _linear_root(alive[0])
            return AlgebraicNumber(alive[0], box)
        if not alive:
            raise OracleError(f"{label}: aucun facteur ne s'annule sur la boule")
        bits *= 2
    raise PrecisionCapError(label, PRECISION_CAP_BITS)


def is_root_of(x: AlgebraicNumber, factor: Poly) -> bool:
    """
    x annule-t-il factor (facteur de son polynôme) ?

    minpoly = factor * cofacteur avec facteurs premiers entre eux : exactement
    l'un des deux s'annule en x.
    """
    factor = to_poly(factor.as_expr(), Z)
    if factor.degree() <= 0:
        return False
    quotient, remainder = sympy.div(x.minpoly, factor)
    if not remainder.is_zero:
        raise AlgebraError("is_root_of: factor ne divise pas le polynôme")
    if quotient.degree() <= 0:
        return True
    bits = 32
    while bits <= PRECISION_CAP_BITS:
        box = x.box_at(bits)
        if not _eval_univariate(factor, box, bits).contains_zero():
            return False
        if not _eval_univariate(quotient, box, bits).contains_zero():
            return True
        bits *= 2
    raise PrecisionCapError("Test d'appartenance à un facteur", PRECISION_CAP_BITS)


def alg_equal(x: AlgebraicNumber, y: AlgebraicNumber) -> bool:
    """Égalité exacte de deux nombres algébriques"""
    if x is y:
        return True
    if x.is_rational and y.is_rational:
        return x.rational_value == y.rational_value
    if not x.box_at(32).overlaps(y.box_at(32)):
        return False
    g = sympy.gcd(x.minpoly, y.minpoly)
    g = to_poly(g.as_expr(), Z)
    if g.degree() <= 0:
        return False
    if not is_root_of(x, g) or not is_root_of(y, g):
        return False
    bits = 64
    while bits <= PRECISION_CAP_BITS:
        roots = isolate_roots(g, bits)
        bx, by = x.box_at(bits), y.box_at(bits)
        ix = [i for i, b in enumerate(roots) if b.overlaps(bx)]
        iy = [i for i, b in enumerate(roots) if b.overlaps(by)]
        if len(ix) == 1 and len(iy) == 1:
            return ix == iy
        bits *= 2
    raise PrecisionCapError("Égalité de nombres algébriques", PRECISION_CAP_BITS)


def _locate(poly: Poly, enclosure_at, label: str) -> AlgebraicNumber:
    """Racine de poly contenue dans enclosure_at(bits), raffinée jusqu'à unicité"""
    poly = squarefree(to_poly(poly.as_expr(), Z)).monic()
    if poly.degree() == 1:
        return _linear_root(poly)
    bits = 64
    while bits <= PRECISION_CAP_BITS:
        enclosure = enclosure_at(bits)
        hits = [b for b in isolate_roots(poly, bits) if b.overlaps(enclosure)]
        if len(hits) == 1:
            return AlgebraicNumber(poly, hits[0]).minimal()
        if not hits:
            raise OracleError(f"{label}: aucune racine dans l'encadrement")
        bits *= 2
    raise PrecisionCapError(label, PRECISION_CAP_BITS)


def alg_sum(x: AlgebraicNumber, y: AlgebraicNumber) -> AlgebraicNumber:
    """
    Somme exacte x + y

    Polynôme : partie sans carré de Res_t(m_x(t), m_y(z - t)) ; boule : la
    racine unique qui rencontre B_x + B_y.
    """
    if x.is_rational and y.is_rational:
        return AlgebraicNumber.rational(x.rational_value + y.rational_value)
    if y.is_rational:
        x, y = y, x
    if x.is_rational:
        q = x.rational_value
        shifted = to_poly(y.minpoly.as_expr().subs(Z, Z - sympy.Rational(q.numerator, q.denominator)), Z)
        return _locate(shifted, lambda bits: y.box_at(bits) + ComplexBall(q), "Somme algébrique")
    t = Symbol("t_")
    mx = to_poly(x.minimal().minpoly.as_expr().subs(Z, t), t)
    my = to_poly(y.minimal().minpoly.as_expr().subs(Z, Z - t), Z, t)
    res = resultant(mx, my, t)
    return _locate(res, lambda bits: x.box_at(bits) + y.box_at(bits), "Somme algébrique")


def alg_neg(x: AlgebraicNumber) -> AlgebraicNumber:
    return alg_scale(x, Fraction(-1))


def alg_scale(x: AlgebraicNumber, q) -> AlgebraicNumber:
    """Produit exact q * x, q rationnel non nul"""
    q = Fraction(q)
    if q == 0:
        return AlgebraicNumber.rational(0)
    if x.is_rational:
        return AlgebraicNumber.rational(q * x.rational_value)
    rq = sympy.Rational(q.numerator, q.denominator)
    scaled = to_poly(sympy.expand(x.minpoly.as_expr().subs(Z, Z / rq)), Z).monic()
    # une homothétie préserve l'isolement de la boule
    return AlgebraicNumber(scaled, x.box.scale(q))


def evaluate_ball(poly: Poly, point: Mapping[Symbol, AlgebraicNumber], bits: int) -> ComplexBall:
    """Boule contenant poly(point), chaque coordonnée raffinée à 2^-bits"""
    boxes = {g: point[g].box_at(bits) for g in poly.gens if g in point}
    powers: Dict[Symbol, List[ComplexBall]] = {g: [ComplexBall(Fraction(1))] for g in boxes}
    total = ComplexBall(Fraction(0))
    for monom, coeff in poly.terms():
        term = ComplexBall.from_rational(fraction_of(coeff), bits + 16)
        for g, e in zip(poly.gens, monom):
            if e == 0:
                continue
            if g not in boxes:
                raise AlgebraError(f"Coordonnée manquante: {g}")
            cache = powers[g]
            while len(cache) <= e:
                cache.append((cache[-1] * boxes[g]).round(bits + 16))
            term = (term * cache[e]).round(bits + 16)
        total = total + term
    return total


def _split_point(poly: Poly, point: Mapping[Symbol, AlgebraicNumber]):
    rationals = {}
    algebraic = []
    for g in poly.gens:
        if poly.degree(g) <= 0:
            continue
        if g not in point:
            raise AlgebraError(f"Coordonnée manquante: {g}")
        value = point[g]
        if value.is_rational:
            rationals[g] = value.rational_value
        else:
            algebraic.append(g)
    return rationals, algebraic


def _substitute_rationals(poly: Poly, rationals: Mapping[Symbol, Fraction]):
    subs = {g: sympy.Rational(v.numerator, v.denominator) for g, v in rationals.items()}
    return sympy.expand(poly.as_expr().subs(subs))


def vanishes_at(poly: Poly, point: Mapping[Symbol, AlgebraicNumber], cap: int = PRECISION_CAP_BITS) -> bool:
    """
    Décide exactement si poly s'annule au point algébrique donné

    Le polynôme d'élimination R(w) = Res(m_1, ... Res(m_k, w - poly)) admet
    poly(point) pour racine ; si R(0) = 0, la borne de Cauchy inférieure des
    racines non nulles de R/w^k sépare la valeur de 0 par évaluation en boules.

    Args:
        poly: Polynôme rationnel
        point: Valeur algébrique de chaque générateur présent
        cap: Précision maximale

    Returns:
        True si la valeur est exactement 0
    """
    rationals, algebraic = _split_point(poly, point)
    expr = _substitute_rationals(poly, rationals)
    if expr == 0:
        return True
    if not algebraic:
        return False
    reduced = to_poly(expr, *algebraic)
    if reduced.total_degree() <= 0:
        return reduced.is_zero
    if not evaluate_ball(reduced, point, 32).contains_zero():
        return False

    elimination = W - expr
    for g in algebraic:
        minimal = point[g].minimal().minpoly
        elimination = sympy.resultant(minimal.as_expr().subs(Z, g), elimination, g)
    coeffs = univariate_coeffs(to_poly(sympy.expand(elimination), W))
    if coeffs[-1] != 0:
        return False
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return True
    s0 = abs(coeffs[-1])
    bound = s0 / (s0 + max(abs(c) for c in coeffs[:-1]))

    bits = 64
    while bits <= cap:
        ball = evaluate_ball(reduced, point, bits)
        if not ball.contains_zero():
            return False
        if ball.abs_upper() < bound:
            return True
        bits *= 2
    raise PrecisionCapError("Test d'annulation", cap)


def specialized_roots(
    poly: Poly, var: Symbol, point: Mapping[Symbol, AlgebraicNumber], precision_bits: int = 128
) -> Optional[List[AlgebraicNumber]]:
    """
    Racines en var de poly spécialisé au point (autres générateurs)

    Returns:
        None si la spécialisation est identiquement nulle en var ; sinon un
        sur-ensemble fini exact des racines, filtré par vanishes_at
    """
    others = [g for g in poly.gens if g != var and poly.degree(g) > 0]
    sub_point = {g: point[g] for g in others}
    coeff_polys = [c for c in _coefficients(poly, var)]
    if all(vanishes_at(c, sub_point) for c in coeff_polys):
        return None
    rationals = {g: point[g].rational_value for g in others if point[g].is_rational}
    algebraic = [g for g in others if not point[g].is_rational]
    expr = _substitute_rationals(poly, rationals)
    for g in algebraic:
        minimal = point[g].minimal().minpoly
        expr = sympy.resultant(minimal.as_expr().subs(Z, g), expr, g)
    eliminated = to_poly(sympy.expand(expr), var)
    if eliminated.is_zero:
        raise OracleError("Élimination dégénérée (plusieurs coordonnées conjuguées)")
    candidates = AlgebraicNumber.roots_of(eliminated, precision_bits)
    if not algebraic:
        return candidates
    return [c for c in candidates if vanishes_at(poly, {**sub_point, var: c})]


def _coefficients(poly: Poly, var: Symbol) -> List[Poly]:
    others = [g for g in poly.gens if g != var]
    if var not in poly.gens:
        return [poly]
    coeffs = Poly(poly.as_expr(), var).all_coeffs()
    if not others:
        return [to_poly(c, var) for c in coeffs]
    return [to_poly(c, *others) for c in coeffs]


def distinct(values: Sequence[AlgebraicNumber]) -> List[AlgebraicNumber]:
    """Supprime les doublons (égalité exacte)"""
    kept: List[AlgebraicNumber] = []
    for v in values:
        if not any(alg_equal(v, k) for k in kept):
            kept.append(v)
    return kept


def contains_value(values: Sequence[AlgebraicNumber], x: AlgebraicNumber) -> bool:
    return any(alg_equal(v, x) for v in values)
