#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Racines de Z^N + Z^(N-1) + a0 et sommes de sous-ensembles
© 2025 - Licence Apache 2.0

Contexte de racines certifiées (boules disjointes, ancre de Viète),
tuples de sommes de racines avec leur provenance, et décision
d'injectivité de l'application sous-ensemble -> somme.
"""

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy
from sympy import Poly

from .algebra import Z, format_poly, fraction_of, isolate_roots, specialize, theta_discriminant, theta_polynomial, to_poly
from .algebraic import AlgebraicNumber, alg_equal, alg_sum
from .balls import ComplexBall
from .config import ESCALATION_FACTOR, PRECISION_CAP_BITS
from .errors import CertificateError, PrecisionCapError
from .logger import Logger

A_SYMBOL = sympy.Symbol("a")

Subset = Tuple[int, ...]


def subset_mask(subset: Sequence[int]) -> int:
    mask = 0
    for i in subset:
        mask |= 1 << i
    return mask


class ThetaContext:
    """
    Racines isolées d'un polynôme de la famille

    family "theta" : Z^N + Z^(N-1) + a0 ; family "quartic" : Z^4 + Z + a0.
    Les racines sont étiquetées dans l'ordre lexicographique (réel, imaginaire)
    des centres.
    """

    def __init__(
        self,
        N: int,
        a0,
        family: str = "theta",
        precision_bits: int = 128,
        escalation_factor: int = ESCALATION_FACTOR,
    ):
        self.logger = Logger("ThetaContext")
        self.N = N
        self.a0 = Fraction(a0)
        self.family = family
        self.precision_bits = precision_bits
        self.escalation_factor = escalation_factor
        if N < 2:
            raise CertificateError("N >= 2 requis")
        a_value = sympy.Rational(self.a0.numerator, self.a0.denominator)
        if family == "theta":
            self.poly = theta_polynomial(N, Z, a_value)
            disc_value = fraction_of(specialize(theta_discriminant(N, A_SYMBOL), {A_SYMBOL: self.a0}).as_expr())
            self.vieta_sum = Fraction(-1)
        elif family == "quartic":
            if N != 4:
                raise CertificateError("La famille quartique exige N = 4")
            self.poly = to_poly(Z**4 + Z + a_value, Z)
            disc_value = 256 * self.a0**3 - 27
            self.vieta_sum = Fraction(0)
        else:
            raise CertificateError(f"Famille inconnue: {family}")
        if disc_value == 0:
            raise CertificateError(f"a0 = {self.a0} annule le discriminant: racines multiples")
        self.discriminant = disc_value

        balls = isolate_roots(self.poly, precision_bits)
        if len(balls) != N:
            raise CertificateError(f"{len(balls)} racines isolées au lieu de {N}")
        monic = self.poly.monic()
        self.roots: List[AlgebraicNumber] = [AlgebraicNumber(monic, b) for b in balls]
        self.separation = min(
            balls[i].gap_lower(balls[j]) for i in range(N) for j in range(i + 1, N)
        )
        total = reduce(lambda acc, b: acc + b, balls, ComplexBall(Fraction(0)))
        if not total.contains_point(self.vieta_sum):
            raise CertificateError("Ancre de Viète violée: somme des racines hors de la boule")
        self._sum_cache: Dict[Tuple[int, int], ComplexBall] = {}
        self._exact_cache: Dict[int, AlgebraicNumber] = {}
        self.logger.debug(
            "Contexte construit",
            {"family": family, "N": N, "a0": str(self.a0), "separation": float(self.separation)},
        )

    @classmethod
    def theta(cls, N: int, a0, precision_bits: int = 128, escalation_factor: int = ESCALATION_FACTOR) -> "ThetaContext":
        return cls(N, a0, "theta", precision_bits, escalation_factor)

    @classmethod
    def quartic(cls, a0, precision_bits: int = 128, escalation_factor: int = ESCALATION_FACTOR) -> "ThetaContext":
        return cls(4, a0, "quartic", precision_bits, escalation_factor)

    def escalation_ceiling(self, cap: int = PRECISION_CAP_BITS) -> int:
        """Précision au-delà de laquelle les boules cèdent à la décision exacte"""
        return min(cap, self.escalation_factor * self.precision_bits)

    def ball(self, i: int, bits: Optional[int] = None) -> ComplexBall:
        return self.roots[i].box_at(bits or self.precision_bits)

    def subset_ball(self, subset: Sequence[int], bits: Optional[int] = None) -> ComplexBall:
        bits = bits or self.precision_bits
        key = (subset_mask(subset), bits)
        cached = self._sum_cache.get(key)
        if cached is None:
            cached = ComplexBall(Fraction(0))
            for i in sorted(subset):
                cached = cached + self.ball(i, bits)
            self._sum_cache[key] = cached
        return cached

    def exact_sum(self, subset: Sequence[int]) -> AlgebraicNumber:
        """Somme exacte des racines d'indices donnés"""
        key = subset_mask(subset)
        cached = self._exact_cache.get(key)
        if cached is None:
            cached = AlgebraicNumber.rational(0)
            for i in sorted(subset):
                cached = alg_sum(cached, self.roots[i])
            self._exact_cache[key] = cached
        return cached

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "N": self.N,
            "a0": str(self.a0),
            "polynomial": format_poly(self.poly),
            "discriminant": str(self.discriminant),
            "precision_bits": self.precision_bits,
            "separation": float(self.separation),
            "roots": [self.ball(i).to_dict() for i in range(self.N)],
        }


@dataclass(frozen=True)
class ConfigEntry:
    """Somme des racines de subset, décalée du rationnel shift"""

    subset: Subset
    shift: Fraction = Fraction(0)

    def ball(self, ctx: ThetaContext, bits: Optional[int] = None) -> ComplexBall:
        return ctx.subset_ball(self.subset, bits) + ComplexBall(self.shift)

    def exact(self, ctx: ThetaContext) -> AlgebraicNumber:
        value = ctx.exact_sum(self.subset)
        if self.shift:
            value = alg_sum(value, AlgebraicNumber.rational(self.shift))
        return value

    def to_dict(self) -> Dict[str, Any]:
        return {"subset": [i + 1 for i in self.subset], "shift": str(self.shift)}


@dataclass
class ConfigTuple:
    """Tuple de sommes de racines, avec la provenance de chaque entrée"""

    ctx: ThetaContext
    entries: List[ConfigEntry]
    label: str = ""
    provenance: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_subsets(cls, ctx: ThetaContext, subsets: Sequence[Sequence[int]], label: str = "", **provenance) -> "ConfigTuple":
        entries = [ConfigEntry(tuple(sorted(s))) for s in subsets]
        return cls(ctx, entries, label, dict(provenance))

    def __len__(self) -> int:
        return len(self.entries)

    def balls(self, bits: Optional[int] = None) -> List[ComplexBall]:
        return [e.ball(self.ctx, bits) for e in self.entries]

    def exact(self, i: int) -> AlgebraicNumber:
        return self.entries[i].exact(self.ctx)

    def shifted(self, i: int, shift, label: str = "") -> "ConfigTuple":
        entries = list(self.entries)
        e = entries[i]
        entries[i] = ConfigEntry(e.subset, e.shift + Fraction(shift))
        return ConfigTuple(self.ctx, entries, label or f"{self.label}+shift", {**self.provenance, "shifted": i + 1})

    def permuted(self, order: Sequence[int], label: str = "") -> "ConfigTuple":
        return ConfigTuple(self.ctx, [self.entries[i] for i in order], label or self.label, dict(self.provenance))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "entries": [e.to_dict() for e in self.entries],
            "values": [b.to_dict() for b in self.balls()],
            "provenance": self.provenance,
        }


def entries_equal(ctx: ThetaContext, left: ConfigEntry, right: ConfigEntry, cap: int = PRECISION_CAP_BITS) -> bool:
    """
    Égalité de deux sommes de racines

    Sous-ensembles identiques : décision immédiate par les décalages ;
    sinon test de disjonction des boules à précision croissante, puis
    égalité algébrique exacte.
    """
    if left.subset == right.subset:
        return left.shift == right.shift
    bits = ctx.precision_bits
    while bits <= ctx.escalation_ceiling(cap):
        if not left.ball(ctx, bits).overlaps(right.ball(ctx, bits)):
            return False
        bits *= 2
    ctx.logger.debug("Égalité de sommes ambiguë: décision exacte", {"left": left.subset, "right": right.subset})
    return alg_equal(left.exact(ctx), right.exact(ctx))


class SubsetSumIndex:
    """Sommes des sous-ensembles de taille k, séparées deux à deux"""

    def __init__(self, ctx: ThetaContext, k: int):
        self.ctx = ctx
        self.k = k
        self.subsets: List[Subset] = list(itertools.combinations(range(ctx.N), k))

    def matching(self, entry: ConfigEntry) -> List[Subset]:
        """Sous-ensembles de taille k dont la somme vaut entry (énumération exhaustive)"""
        target = entry.ball(self.ctx)
        found = []
        for s in self.subsets:
            candidate = ConfigEntry(s)
            if not self.ctx.subset_ball(s).overlaps(target):
                continue
            if entries_equal(self.ctx, candidate, entry):
                found.append(s)
        return found


@dataclass
class InjectivityResult:
    """Décision d'injectivité des sommes de k racines"""

    N: int
    k: int
    a0: Fraction
    injective: bool
    subsets: int
    min_separation: Optional[Fraction]
    collisions: List[Tuple[Subset, Subset]] = field(default_factory=list)
    exact_fallbacks: int = 0
    duration_ms: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "N": self.N,
            "k": self.k,
            "a0": str(self.a0),
            "injective": self.injective,
            "subsets": self.subsets,
            "min_separation": float(self.min_separation) if self.min_separation is not None else None,
            "collisions": [[[i + 1 for i in s] for s in pair] for pair in self.collisions],
            "exact_fallbacks": self.exact_fallbacks,
        }


def subset_sum_injective(ctx: ThetaContext, k: int, cap: int = PRECISION_CAP_BITS) -> InjectivityResult:
    """
    Les C(N, k) sommes de k racines distinctes sont-elles deux à deux distinctes ?

    Disjonction des boules à précision croissante ; les paires encore
    ambiguës au plafond d'escalade du contexte sont décidées par égalité
    algébrique exacte.

    Returns:
        Décision, séparation minimale certifiée et collisions éventuelles
    """
    if not 1 <= k <= ctx.N:
        raise CertificateError(f"1 <= k <= N requis (k = {k}, N = {ctx.N})")
    started = time.perf_counter()
    subsets = list(itertools.combinations(range(ctx.N), k))
    bits = ctx.precision_bits
    pending = [(i, j) for i in range(len(subsets)) for j in range(i + 1, len(subsets))]
    separation: Optional[Fraction] = None
    collisions: List[Tuple[Subset, Subset]] = []
    fallbacks = 0
    while pending:
        balls = [ctx.subset_ball(s, bits) for s in subsets]
        unresolved = []
        for i, j in pending:
            gap = balls[i].gap_lower(balls[j])
            if gap > 0:
                separation = gap if separation is None else min(separation, gap)
            else:
                unresolved.append((i, j))
        pending = unresolved
        if not pending:
            break
        if bits * 2 > ctx.escalation_ceiling(cap):
            for i, j in pending:
                fallbacks += 1
                try:
                    same = alg_equal(ctx.exact_sum(subsets[i]), ctx.exact_sum(subsets[j]))
                except PrecisionCapError:
                    ctx.logger.warning("Décision exacte impossible", {"left": subsets[i], "right": subsets[j]})
                    raise
                if same:
                    collisions.append((subsets[i], subsets[j]))
            break
        ctx.logger.log_escalation("subset_sum_injective", bits * 2, pending=len(pending))
        bits *= 2

    result = InjectivityResult(
        N=ctx.N,
        k=k,
        a0=ctx.a0,
        injective=not collisions,
        subsets=len(subsets),
        min_separation=separation,
        collisions=collisions,
        exact_fallbacks=fallbacks,
        duration_ms=(time.perf_counter() - started) * 1000,
    )
    if collisions:
        ctx.logger.warning("a0 non générique: sommes confondues", {"N": ctx.N, "k": k, "a0": str(ctx.a0)})
    return result
