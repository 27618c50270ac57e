#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Boules complexes et isolation certifiée
© 2025 - Licence Apache 2.0

Arithmétique de boules (centre dyadique exact, rayon rationnel majorant) et
isolation des racines d'un polynôme rationnel sans facteur carré. Les
approximations viennent de mpmath.polyroots ; la certification utilise le
disque d'inclusion de Newton |z - racine| <= n |f(z) / f'(z)| et la
disjonction deux à deux des disques.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import mpmath

from .config import PRECISION_CAP_BITS
from .errors import AlgebraError, PrecisionCapError
from .logger import get_logger

_ABS_BITS = 64

Number = Union[int, Fraction]


def floor_dyadic(q: Fraction, bits: int) -> Fraction:
    """Plus grand dyadique k/2^bits inférieur ou égal à q"""
    scale = 1 << bits
    return Fraction((q.numerator * scale) // q.denominator, scale)


def ceil_dyadic(q: Fraction, bits: int) -> Fraction:
    """Plus petit dyadique k/2^bits supérieur ou égal à q"""
    scale = 1 << bits
    return Fraction(-((-q.numerator * scale) // q.denominator), scale)


def _sqrt_bits(q: Fraction, bits: Optional[int]) -> int:
    """Grille des racines : _ABS_BITS bits significatifs quelle que soit la taille de q"""
    if bits is not None:
        return bits
    shift = (q.denominator.bit_length() - q.numerator.bit_length()) // 2 + 1
    return _ABS_BITS + max(0, shift)


def sqrt_upper(q: Fraction, bits: Optional[int] = None) -> Fraction:
    """Majorant dyadique de sqrt(q)"""
    if q <= 0:
        return Fraction(0)
    bits = _sqrt_bits(q, bits)
    scale = 1 << (2 * bits)
    n = -((-q.numerator * scale) // q.denominator)
    r = isqrt(n)
    if r * r < n:
        r += 1
    return Fraction(r, 1 << bits)


def sqrt_lower(q: Fraction, bits: Optional[int] = None) -> Fraction:
    """Minorant dyadique de sqrt(q)"""
    if q <= 0:
        return Fraction(0)
    bits = _sqrt_bits(q, bits)
    n = (q.numerator << (2 * bits)) // q.denominator
    return Fraction(isqrt(n), 1 << bits)


def mpf_to_fraction(x: Any) -> Fraction:
    """Valeur exacte d'un mpf mpmath"""
    x = mpmath.mpf(x)
    if not mpmath.isfinite(x):
        raise AlgebraError(f"Approximation non finie: {x}")
    if x == 0:
        return Fraction(0)
    man, exp = x.man_exp
    value = Fraction(man) * (Fraction(2) ** exp)
    return -value if x < 0 else value


@dataclass(frozen=True)
class ComplexBall:
    """Disque fermé {z : |z - (re + i im)| <= rad}"""

    re: Fraction
    im: Fraction = Fraction(0)
    rad: Fraction = Fraction(0)

    @classmethod
    def exact(cls, re: Number, im: Number = 0) -> "ComplexBall":
        return cls(Fraction(re), Fraction(im), Fraction(0))

    @classmethod
    def from_rational(cls, q: Number, bits: Optional[int] = None) -> "ComplexBall":
        """Boule contenant q, centre dyadique si bits est donné"""
        q = Fraction(q)
        if bits is None or q.denominator & (q.denominator - 1) == 0:
            return cls(q)
        mid = floor_dyadic(q, bits)
        return cls(mid, Fraction(0), ceil_dyadic(q - mid, bits))

    # -- arithmétique ---------------------------------------------------

    def __add__(self, other: Union["ComplexBall", Number]) -> "ComplexBall":
        other = _as_ball(other)
        return ComplexBall(self.re + other.re, self.im + other.im, self.rad + other.rad)

    __radd__ = __add__

    def __neg__(self) -> "ComplexBall":
        return ComplexBall(-self.re, -self.im, self.rad)

    def __sub__(self, other: Union["ComplexBall", Number]) -> "ComplexBall":
        return self + (-_as_ball(other))

    def __rsub__(self, other: Number) -> "ComplexBall":
        return _as_ball(other) - self

    def __mul__(self, other: Union["ComplexBall", Number]) -> "ComplexBall":
        if not isinstance(other, ComplexBall):
            return self.scale(Fraction(other))
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        if self.rad == 0 and other.rad == 0:
            return ComplexBall(re, im)
        rad = (
            self.mid_abs_upper() * other.rad
            + other.mid_abs_upper() * self.rad
            + self.rad * other.rad
        )
        return ComplexBall(re, im, rad)

    __rmul__ = __mul__

    def scale(self, q: Fraction) -> "ComplexBall":
        """Multiplication exacte par un rationnel"""
        return ComplexBall(self.re * q, self.im * q, self.rad * abs(q))

    def __pow__(self, k: int) -> "ComplexBall":
        result = ComplexBall(Fraction(1))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def round(self, bits: int) -> "ComplexBall":
        """Arrondit le centre à 2^-bits, le rayon absorbe l'erreur"""
        re = floor_dyadic(self.re, bits)
        im = floor_dyadic(self.im, bits)
        if re == self.re and im == self.im and self.rad.denominator <= (1 << bits):
            return self
        err = Fraction(2, 1 << bits) if (re != self.re or im != self.im) else Fraction(0)
        return ComplexBall(re, im, ceil_dyadic(self.rad + err, bits))

    # -- bornes et prédicats --------------------------------------------

    def mid_abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def mid_abs_upper(self) -> Fraction:
        return sqrt_upper(self.mid_abs2())

    def abs_upper(self) -> Fraction:
        """Majorant de |z| sur la boule"""
        return self.mid_abs_upper() + self.rad

    def abs_lower(self) -> Fraction:
        """Minorant de |z| sur la boule (0 si la boule contient 0)"""
        return max(Fraction(0), sqrt_lower(self.mid_abs2()) - self.rad)

    def contains_zero(self) -> bool:
        return self.mid_abs2() <= self.rad * self.rad

    def contains_point(self, re: Number, im: Number = 0) -> bool:
        dre = self.re - Fraction(re)
        dim = self.im - Fraction(im)
        return dre * dre + dim * dim <= self.rad * self.rad

    def contains(self, other: "ComplexBall") -> bool:
        """Inclusion de la boule other dans self"""
        if other.rad > self.rad:
            return False
        slack = self.rad - other.rad
        return self._dist2(other) <= slack * slack

    def overlaps(self, other: "ComplexBall") -> bool:
        total = self.rad + other.rad
        return self._dist2(other) <= total * total

    def gap_lower(self, other: "ComplexBall") -> Fraction:
        """Minorant de la distance entre deux boules (négatif si elles se coupent)"""
        return sqrt_lower(self._dist2(other)) - self.rad - other.rad

    def _dist2(self, other: "ComplexBall") -> Fraction:
        dre = self.re - other.re
        dim = self.im - other.im
        return dre * dre + dim * dim

    def sort_key(self) -> Tuple[Fraction, Fraction]:
        return (self.re, self.im)

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_dict(self) -> Dict[str, str]:
        """Forme lisible pour les rapports"""
        return {
            "re": mpmath.nstr(mpmath.mpf(self.re.numerator) / self.re.denominator, 20),
            "im": mpmath.nstr(mpmath.mpf(self.im.numerator) / self.im.denominator, 20),
            "rad": mpmath.nstr(mpmath.mpf(self.rad.numerator) / self.rad.denominator, 3),
        }

    def __repr__(self) -> str:
        d = self.to_dict()
        return f"Ball({d['re']} + {d['im']}i ± {d['rad']})"


def _as_ball(value: Union[ComplexBall, Number]) -> ComplexBall:
    if isinstance(value, ComplexBall):
        return value
    return ComplexBall(Fraction(value))


def horner(coeffs: Sequence[Union[ComplexBall, Number]], x: ComplexBall, bits: int) -> ComplexBall:
    """
    Évalue un polynôme (coefficients du plus haut degré au plus bas) sur une boule

    Args:
        coeffs: Coefficients, boules ou rationnels
        x: Point d'évaluation
        bits: Précision d'arrondi des centres intermédiaires

    Returns:
        Boule contenant toutes les valeurs possibles
    """
    acc = ComplexBall(Fraction(0))
    for c in coeffs:
        acc = (acc * x + _as_ball(c)).round(bits)
    return acc


def _derivative(coeffs: Sequence[Union[ComplexBall, Number]]) -> List[Union[ComplexBall, Number]]:
    n = len(coeffs) - 1
    return [_as_ball(c) * (n - i) for i, c in enumerate(coeffs[:-1])]


def _approximate_roots(coeffs: Sequence[Fraction], bits: int) -> Optional[List[Tuple[Fraction, Fraction]]]:
    """Racines approchées (centres dyadiques) via mpmath.polyroots"""
    n = len(coeffs) - 1
    with mpmath.workprec(bits + 16):
        mp_coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in coeffs]
        try:
            approx = mpmath.polyroots(mp_coeffs, maxsteps=100 + 20 * n, extraprec=bits)
        except mpmath.libmp.NoConvergence:
            return None
        mids = []
        for r in approx:
            re = floor_dyadic(mpf_to_fraction(mpmath.re(r)), bits)
            im = floor_dyadic(mpf_to_fraction(mpmath.im(r)), bits)
            mids.append((re, im))
    return mids


def _certify(
    coeffs: Sequence[Union[ComplexBall, Number]],
    mids: Sequence[Tuple[Fraction, Fraction]],
    bits: int,
    target: Fraction,
) -> Optional[List[ComplexBall]]:
    """Disques d'inclusion de Newton ; None si non certifiable à cette précision"""
    n = len(coeffs) - 1
    deriv = _derivative(coeffs)
    balls = []
    for re, im in mids:
        z = ComplexBall(re, im)
        value = horner(coeffs, z, bits + 32)
        slope = horner(deriv, z, bits + 32)
        low = slope.abs_lower()
        if low == 0:
            return None
        radius = ceil_dyadic(n * value.abs_upper() / low, bits + 32)
        if radius > target:
            return None
        balls.append(ComplexBall(re, im, radius))
    for i in range(len(balls)):
        for j in range(i + 1, len(balls)):
            if balls[i].overlaps(balls[j]):
                return None
    return balls


def sort_roots(balls: Sequence[ComplexBall]) -> List[ComplexBall]:
    """
    Ordre lexicographique (partie réelle, partie imaginaire) des centres

    Les boules dont les projections réelles se coupent (racines conjuguées)
    sont départagées par la partie imaginaire seule.
    """
    ordered = sorted(balls, key=ComplexBall.sort_key)
    result: List[ComplexBall] = []
    group: List[ComplexBall] = []
    for ball in ordered:
        if group and ball.re - group[-1].re > ball.rad + group[-1].rad:
            result.extend(sorted(group, key=lambda b: b.im))
            group = []
        group.append(ball)
    result.extend(sorted(group, key=lambda b: b.im))
    return result


@lru_cache(maxsize=4096)
def _isolate_cached(coeffs: Tuple[Fraction, ...], precision_bits: int, cap: int) -> Tuple[ComplexBall, ...]:
    logger = get_logger("RootIsolation")
    target = Fraction(1, 1 << precision_bits)
    bits = precision_bits + 32
    while bits <= cap + 64:
        mids = _approximate_roots(coeffs, bits)
        if mids is not None and len(mids) == len(coeffs) - 1:
            balls = _certify(coeffs, mids, bits, target)
            if balls is not None:
                return tuple(sort_roots(balls))
        logger.log_escalation("isolation", bits, degree=len(coeffs) - 1)
        bits *= 2
    raise PrecisionCapError("Isolation des racines non certifiée", cap)


def isolate_poly_coeffs(
    coeffs: Sequence[Fraction], precision_bits: int = 128, cap: int = PRECISION_CAP_BITS
) -> List[ComplexBall]:
    """
    Isole les racines d'un polynôme sans facteur carré donné par ses coefficients

    Args:
        coeffs: Coefficients rationnels, du plus haut degré au plus bas
        precision_bits: Rayon cible 2^-precision_bits
        cap: Précision maximale avant PrecisionCapError

    Returns:
        Une boule par racine, deux à deux disjointes, triées
    """
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if len(coeffs) <= 1:
        return []
    if len(coeffs) == 2:
        return [ComplexBall(-coeffs[1] / coeffs[0])]
    return list(_isolate_cached(tuple(coeffs), precision_bits, cap))


def isolate_ball_poly(
    coeffs_at: Callable[[int], Sequence[ComplexBall]],
    precision_bits: int = 128,
    cap: int = PRECISION_CAP_BITS,
) -> List[ComplexBall]:
    """
    Isolation pour un polynôme à coefficients boules

    Chaque disque rendu contient exactement une racine de tout polynôme dont
    les coefficients sont dans les boules (coefficient dominant non nul).

    Args:
        coeffs_at: Coefficients (plus haut degré en tête) calculés à une précision donnée
        precision_bits: Rayon cible 2^-precision_bits
        cap: Précision maximale

    Returns:
        Boules disjointes triées
    """
    bits = precision_bits + 32
    target = Fraction(1, 1 << precision_bits)
    while bits <= cap + 64:
        coeffs = list(coeffs_at(bits))
        if not coeffs or coeffs[0].contains_zero():
            raise AlgebraError("Coefficient dominant non séparé de 0")
        mids = _approximate_ball_roots(coeffs, bits)
        if mids is not None and len(mids) == len(coeffs) - 1:
            balls = _certify(coeffs, mids, bits, target)
            if balls is not None:
                return sort_roots(balls)
        get_logger("RootIsolation").log_escalation("isolation_boules", bits, degree=len(coeffs) - 1)
        bits *= 2
    raise PrecisionCapError("Isolation à coefficients boules non certifiée", cap)


def _approximate_ball_roots(coeffs: Sequence[ComplexBall], bits: int) -> Optional[List[Tuple[Fraction, Fraction]]]:
    n = len(coeffs) - 1
    with mpmath.workprec(bits + 16):
        mp_coeffs = [
            mpmath.mpc(mpmath.mpf(c.re.numerator) / c.re.denominator, mpmath.mpf(c.im.numerator) / c.im.denominator)
            for c in coeffs
        ]
        try:
            approx = mpmath.polyroots(mp_coeffs, maxsteps=100 + 20 * n, extraprec=bits)
        except mpmath.libmp.NoConvergence:
            return None
        return [
            (floor_dyadic(mpf_to_fraction(mpmath.re(r)), bits), floor_dyadic(mpf_to_fraction(mpmath.im(r)), bits))
            for r in approx
        ]
