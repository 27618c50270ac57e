#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Sémantique exacte
© 2025 - Licence Apache 2.0

Évaluation exacte des formules en des points algébriques, et vérification
d'équivalence par échantillonnage (points rationnels aléatoires, points
tirés sur chaque courbe, constantes exceptionnelles enregistrées).
"""

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Sequence, Tuple, Union

import numpy as np

from .algebraic import AlgebraicNumber, alg_equal, contains_value, distinct
from .curves import INFINITE, random_rational
from .errors import SamplingError, UnsupportedShapeError
from .formula import (
    QUANTIFIERS,
    And,
    Atom,
    CountAtLeast,
    CountExactly,
    CountInfinite,
    Equals,
    Exists,
    FalseFormula,
    Formula,
    Not,
    Or,
    TrueFormula,
    atoms,
    children,
    dnf_disjuncts,
    free_vars,
    to_text,
)
from .logger import Logger
from .oracle import CurveOracle

Point = Dict[str, AlgebraicNumber]


class Evaluator:
    """Valeur de vérité exacte d'une formule en un point algébrique"""

    def __init__(self, oracle: CurveOracle):
        self.oracle = oracle
        self._atom_cache: Dict[Tuple[Atom, Tuple[int, ...]], Tuple[Tuple[AlgebraicNumber, ...], bool]] = {}

    def evaluate(self, f: Formula, point: Mapping[str, AlgebraicNumber]) -> bool:
        if isinstance(f, TrueFormula):
            return True
        if isinstance(f, FalseFormula):
            return False
        if isinstance(f, Atom):
            return self._atom(f, point)
        if isinstance(f, Equals):
            return alg_equal(point[f.var], self.oracle.constant(f.const))
        if isinstance(f, Not):
            return not self.evaluate(f.arg, point)
        if isinstance(f, And):
            return all(self.evaluate(a, point) for a in f.args)
        if isinstance(f, Or):
            return any(self.evaluate(a, point) for a in f.args)
        if isinstance(f, (Exists, CountAtLeast)):
            d = 1 if isinstance(f, Exists) else f.d
            return d <= 0 or self.count(f.var, f.body, point) >= d
        if isinstance(f, CountExactly):
            return self.count(f.var, f.body, point) == f.d
        if isinstance(f, CountInfinite):
            return self.count(f.var, f.body, point) == INFINITE
        raise TypeError(f"Nœud inconnu: {f!r}")

    def _atom(self, atom: Atom, point: Mapping[str, AlgebraicNumber]) -> bool:
        values = tuple(point[a] for a in atom.args)
        key = (atom, tuple(id(v) for v in values))
        cached = self._atom_cache.get(key)
        if cached is not None and all(a is b for a, b in zip(cached[0], values)):
            return cached[1]
        result = self.oracle.eval(atom, point)
        self._atom_cache[key] = (values, result)
        return result

    def _literals(self, f: Formula, var: str) -> Tuple[List[Formula], bool]:
        """Littéraux en var hors quantificateurs, et présence de var sous un quantificateur"""
        found: List[Formula] = []
        nested = False
        stack = [f]
        while stack:
            g = stack.pop()
            if isinstance(g, QUANTIFIERS):
                if var in free_vars(g):
                    nested = True
                continue
            if isinstance(g, Atom) and var in g.args:
                found.append(g)
            elif isinstance(g, Equals) and g.var == var:
                found.append(g)
            stack.extend(children(g))
        return found, nested

    def count(self, var: str, body: Formula, point: Mapping[str, AlgebraicNumber]) -> Union[int, float]:
        """
        Nombre de valeurs de var satisfaisant body (INFINITE si cofini)

        Hors de la réunion des bords des fibres des littéraux, la valeur de
        vérité de body ne dépend pas de var : on évalue chaque point du bord
        et un point générique.

        Raises:
            UnsupportedShapeError: var contraint seulement par un quantificateur interne
        """
        literals, nested = self._literals(body, var)
        boundary: List[AlgebraicNumber] = []
        finite_literals = set()
        for lit in literals:
            if isinstance(lit, Equals):
                boundary.append(self.oracle.constant(lit.const))
                finite_literals.add(lit)
                continue
            cofinite, values = self.oracle.fiber(lit, var, point)
            boundary.extend(values)
            if not cofinite:
                finite_literals.add(lit)
        boundary = distinct(boundary)

        if nested:
            for lits in dnf_disjuncts(body):
                if not any(lit in finite_literals for lit in lits):
                    raise UnsupportedShapeError(
                        f"{var} contraint seulement par un quantificateur interne: {to_text(body)}"
                    )
            generic_true = False
        else:
            generic = _generic_value(boundary)
            generic_true = self.evaluate(body, {**point, var: generic})
        if generic_true:
            return INFINITE
        return sum(1 for b in boundary if self.evaluate(body, {**point, var: b}))


def _generic_value(boundary: Sequence[AlgebraicNumber]) -> AlgebraicNumber:
    k = 0
    while True:
        candidate = AlgebraicNumber.rational(Fraction(k // 2 + 1, 1) * (1 if k % 2 == 0 else -1) + Fraction(1, 7))
        if not contains_value(boundary, candidate):
            return candidate
        k += 1


def evaluate(f: Formula, point: Mapping[str, AlgebraicNumber], oracle: CurveOracle) -> bool:
    return Evaluator(oracle).evaluate(f, point)


@dataclass
class EquivalenceReport:
    """Bilan d'une comparaison échantillonnée"""

    points_checked: int
    disagreements: List[Dict[str, str]] = field(default_factory=list)
    sources: Dict[str, int] = field(default_factory=dict)
    duration_ms: float = 0.0

    @property
    def agree(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> Dict[str, Any]:
        return {
            "points_checked": self.points_checked,
            "disagreements": self.disagreements,
            "sources": self.sources,
            "agree": self.agree,
        }


def _point_text(point: Mapping[str, AlgebraicNumber]) -> Dict[str, str]:
    return {v: point[v].to_text() for v in sorted(point)}


def sample_assignments(
    formulas: Sequence[Formula], oracle: CurveOracle, n: int, seed: int
) -> List[Tuple[str, Point]]:
    """
    Points d'évaluation : d'abord tirés sur chaque courbe présente, puis
    chaque constante enregistrée en chaque variable, puis rationnels aléatoires
    """
    variables = sorted(set().union(*(free_vars(f) for f in formulas)))
    logger = Logger("Sampler")
    if not variables:
        return [("closed", {})]
    seq_curves, seq_constants, seq_random = np.random.SeedSequence(seed).spawn(3)
    rng = np.random.default_rng(seq_random)
    fill_rng = np.random.default_rng(seq_constants)

    def completed(partial: Point, source_rng: np.random.Generator) -> Point:
        point = dict(partial)
        for v in variables:
            if v not in point:
                point[v] = AlgebraicNumber.rational(random_rational(source_rng))
        return point

    result: List[Tuple[str, Point]] = []
    present = [a for f in formulas for a in atoms(f) if set(a.args) & set(variables)]
    unique: List[Atom] = []
    for a in present:
        if a not in unique:
            unique.append(a)
    if unique:
        per_atom = max(1, (2 * n) // (5 * len(unique)))
        seeds = seq_curves.generate_state(len(unique))
        for atom, atom_seed in zip(unique, seeds):
            try:
                pts = oracle.curve(atom.symbol).sample_points(per_atom, int(atom_seed))
            except SamplingError as e:
                logger.warning("Échantillonnage impossible", {"symbol": atom.symbol, "reason": str(e)})
                continue
            for pt in pts:
                partial = {v: c for v, c in zip(atom.args, pt) if v in variables}
                result.append(("curve", completed(partial, fill_rng)))

    for value in oracle.constants.values():
        for v in variables:
            result.append(("constant", completed({v: value}, fill_rng)))

    while len(result) < n:
        result.append(("random", completed({}, rng)))
    return result


def check_equivalence_sampled(
    f: Formula, g: Formula, oracle: CurveOracle, n: int = 500, seed: int = 20240601,
    stop_at_first: bool = False,
) -> EquivalenceReport:
    """
    Compare f et g en au moins n points (courbes, constantes, aléatoires)

    Returns:
        Rapport listant chaque point de désaccord
    """
    logger = Logger("Equivalence")
    started = time.perf_counter()
    evaluator = Evaluator(oracle)
    points = sample_assignments([f, g], oracle, n, seed)
    report = EquivalenceReport(points_checked=0)
    for source, point in points:
        left = evaluator.evaluate(f, point)
        right = evaluator.evaluate(g, point)
        report.points_checked += 1
        report.sources[source] = report.sources.get(source, 0) + 1
        if left != right:
            witness = _point_text(point)
            witness["source"] = source
            witness["left"] = str(left)
            witness["right"] = str(right)
            report.disagreements.append(witness)
            logger.warning("Désaccord", witness)
            if stop_at_first:
                break
    report.duration_ms = (time.perf_counter() - started) * 1000
    logger.log_performance(
        "check_equivalence_sampled",
        report.duration_ms,
        points=report.points_checked,
        disagreements=len(report.disagreements),
    )
    return report
