#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Algèbre exacte
© 2025 - Licence Apache 2.0

Polynômes multivariés à coefficients rationnels (sympy.Poly sur QQ) :
résultants, discriminants, contenus, tests de carré parfait, critères
d'irréductibilité et isolation certifiée des racines.
"""

from fractions import Fraction
from math import isqrt
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy
from sympy import QQ, Poly, Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .balls import PRECISION_CAP_BITS, ComplexBall, isolate_poly_coeffs
from .errors import AlgebraError

# Générateur univarié canonique des polynômes minimaux
Z = Symbol("z")
# Variable d'élimination des tests d'annulation
W = Symbol("w_")

_TRANSFORMATIONS = standard_transformations + (convert_xor,)


def positional_gens(n: int) -> Tuple[Symbol, ...]:
    """Générateurs positionnels x0, ..., x{n-1} des courbes"""
    return tuple(Symbol(f"x{i}") for i in range(n))


def to_poly(expr, *gens: Symbol) -> Poly:
    """Poly sur QQ dans les générateurs donnés"""
    return Poly(expr, *gens, domain=QQ)


def parse_poly(text: str, gens: Sequence[Symbol]) -> Poly:
    """
    Lit un polynôme en notation texte ("x1 - x0^2", "3/2*x0*x1 + 1")

    Args:
        text: Forme texte, ^ ou ** pour les puissances
        gens: Générateurs autorisés

    Returns:
        Poly sur QQ
    """
    local = {str(g): g for g in gens}
    try:
        expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMATIONS)
    except (SyntaxError, TypeError, sympy.SympifyError) as e:
        raise AlgebraError(f"Polynôme illisible: {text!r}") from e
    unknown = expr.free_symbols - set(gens)
    if unknown:
        raise AlgebraError(f"Variables inconnues {sorted(map(str, unknown))} dans {text!r}")
    return to_poly(expr, *gens)


def format_poly(p: Poly) -> str:
    """Forme texte stable, puissances notées ^"""
    return str(p.as_expr()).replace("**", "^")


def poly_to_terms(p: Poly) -> List[List]:
    """Liste de termes [[exposants], "num/den"] (forme JSON)"""
    return [[list(monom), str(coeff)] for monom, coeff in p.terms()]


def fraction_of(c) -> Fraction:
    """Rationnel sympy vers Fraction"""
    c = sympy.Rational(c)
    return Fraction(int(c.p), int(c.q))


def degree_in(p: Poly, var: Symbol) -> int:
    """Degré en var (0 si var n'est pas un générateur, -inf pour 0)"""
    if var not in p.gens:
        return 0 if not p.is_zero else -1
    return p.degree(var)


def _merged_gens(*polys: Poly) -> List[Symbol]:
    gens: List[Symbol] = []
    for p in polys:
        for g in p.gens:
            if g not in gens:
                gens.append(g)
    return gens


def _poly_over(expr, gens: Sequence[Symbol], fallback: Symbol) -> Poly:
    if gens:
        return to_poly(expr, *gens)
    return to_poly(expr, fallback)


def resultant(p: Poly, q: Poly, var: Symbol) -> Poly:
    """
    Résultant par rapport à var (sous-résultants de sympy)

    Args:
        p, q: Polynômes de degré >= 1 en var
        var: Variable éliminée

    Returns:
        Poly dans les autres générateurs (constante dans var s'il n'en reste aucun)
    """
    if degree_in(p, var) < 1 or degree_in(q, var) < 1:
        raise AlgebraError(f"Résultant en {var}: degré nul")
    rest = [g for g in _merged_gens(p, q) if g != var]
    res = sympy.resultant(p.as_expr(), q.as_expr(), var)
    return _poly_over(sympy.expand(res), rest, var)


def discriminant(p: Poly, var: Symbol) -> Poly:
    """Discriminant (-1)^(n(n-1)/2) Res(p, p') / lc(p) par rapport à var"""
    if degree_in(p, var) < 2:
        raise AlgebraError(f"Discriminant en {var}: degré < 2")
    rest = [g for g in p.gens if g != var]
    disc = sympy.discriminant(p.as_expr(), var)
    return _poly_over(sympy.expand(disc), rest, var)


def squarefree(p: Poly) -> Poly:
    """Partie sans facteur carré"""
    if p.is_zero:
        raise AlgebraError("Partie sans carré du polynôme nul")
    return p.sqf_part()


def coefficients_in(p: Poly, var: Symbol) -> List[Poly]:
    """Coefficients de p vu dans (autres générateurs)[var], degré décroissant"""
    rest = [g for g in p.gens if g != var]
    if var not in p.gens:
        return [p]
    return [_poly_over(c, rest, var) for c in Poly(p.as_expr(), var).all_coeffs()]


def coeff_gcd_in(p: Poly, var: Symbol) -> Poly:
    """
    PGCD des coefficients de p vu comme polynôme en var

    Ses zéros dans les autres variables sont exactement les paramètres où p
    s'annule identiquement en var.
    """
    rest = [g for g in p.gens if g != var]
    coeffs = Poly(p.as_expr(), var).all_coeffs() if var in p.gens else [p.as_expr()]
    if rest:
        g = sympy.gcd_list(coeffs, *rest)
    else:
        g = sympy.gcd_list(coeffs)
    result = _poly_over(g, rest, var)
    return result.monic() if not result.is_zero and result.total_degree() > 0 else result


def primitive_part_in(p: Poly, var: Symbol) -> Poly:
    """p divisé par son contenu en var"""
    content = coeff_gcd_in(p, var)
    if content.total_degree() <= 0:
        return p
    quotient, remainder = sympy.div(p.as_expr(), content.as_expr(), *p.gens)
    if remainder != 0:
        raise AlgebraError("Division par le contenu non exacte")
    return to_poly(quotient, *p.gens)


def is_rational_square(q: Fraction) -> bool:
    """q est le carré d'un rationnel"""
    if q < 0:
        return False
    num, den = q.numerator, q.denominator
    return isqrt(num) ** 2 == num and isqrt(den) ** 2 == den


def perfect_square_test(p: Poly) -> bool:
    """
    Décide si p est le carré d'un polynôme de Q[variables]

    Parité des degrés, puis décomposition sans carré : p = c prod f_i^e_i est
    un carré si et seulement si tous les e_i sont pairs et c est un carré.
    """
    if p.is_zero:
        return True
    for g in p.gens:
        if p.degree(g) % 2:
            return False
    coeff, factors = p.sqf_list()
    if any(mult % 2 for _, mult in factors):
        return False
    return is_rational_square(fraction_of(coeff))


def linear_in_a_irreducible(p: Poly, a: Symbol) -> bool:
    """
    Irréductibilité dans Q(a)[t] d'un polynôme de degré 1 en a

    p = c1(t) a + c0(t) est irréductible si et seulement si pgcd(c1, c0) est
    constant (lemme de Gauss).

    Raises:
        AlgebraError: si p n'est pas de degré 1 en a
    """
    if degree_in(p, a) != 1:
        raise AlgebraError(f"Précondition: degré 1 en {a} requis, degré {degree_in(p, a)}")
    c1, c0 = coefficients_in(p, a)
    rest = [g for g in p.gens if g != a]
    g = sympy.gcd(c1.as_expr(), c0.as_expr(), *rest) if rest else sympy.gcd(c1.as_expr(), c0.as_expr())
    return _poly_over(g, rest, a).total_degree() == 0


def rational_roots(p: Poly) -> List[Fraction]:
    """Racines rationnelles d'un polynôme univarié (test des candidats p/q)"""
    coeffs = [fraction_of(c) for c in p.all_coeffs()]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    roots: List[Fraction] = []
    if len(coeffs) < len(p.all_coeffs()):
        roots.append(Fraction(0))
    if len(coeffs) <= 1:
        return roots
    den_lcm = 1
    for c in coeffs:
        den_lcm = den_lcm * c.denominator // sympy.igcd(den_lcm, c.denominator)
    ints = [int(c * den_lcm) for c in coeffs]
    candidates = set()
    for num in sympy.divisors(abs(ints[-1])):
        for den in sympy.divisors(abs(ints[0])):
            candidates.add(Fraction(num, den))
            candidates.add(Fraction(-num, den))
    for r in sorted(candidates):
        value = Fraction(0)
        for c in ints:
            value = value * r + c
        if value == 0:
            roots.append(r)
    return sorted(roots)


def landau_mignotte_bound(p: Poly, factor_degree: int) -> int:
    """Borne entière des coefficients d'un facteur de degré donné"""
    norm2 = sum(int(c) ** 2 for c in p.all_coeffs())
    return int(sympy.binomial(factor_degree, factor_degree // 2)) * (isqrt(norm2) + 1)


def integer_quadratic_factor(p: Poly) -> Optional[Tuple[Poly, Poly]]:
    """
    Cherche une factorisation p = g h avec g, h de degré 2 dans Z[X]

    Recherche exhaustive dans la borne de Landau-Mignotte ; p doit être
    un polynôme primitif de degré 4 à coefficients entiers, sans racine nulle.
    """
    x = p.gens[0]
    if p.degree() != 4:
        raise AlgebraError("Recherche de facteur quadratique: degré 4 requis")
    coeffs = [int(c) for c in p.all_coeffs()]
    lead, const = coeffs[0], coeffs[-1]
    if const == 0:
        raise AlgebraError("Racine nulle: extraire X d'abord")
    bound = landau_mignotte_bound(p, 2)
    for a in sympy.divisors(abs(lead)):
        for c_abs in sympy.divisors(abs(const)):
            for c in (c_abs, -c_abs):
                for b in range(-bound, bound + 1):
                    g = Poly(a * x**2 + b * x + c, x, domain=sympy.ZZ)
                    h, r = sympy.div(p, g, domain=QQ)
                    if r.is_zero and all(fraction_of(k).denominator == 1 for k in h.all_coeffs()):
                        return g, Poly(h.as_expr(), x, domain=sympy.ZZ)
    return None


def resolvent_cubic(quartic: Poly, var: Symbol) -> Poly:
    """
    Cubique résolvante X^3 - p X^2 - 4 r X + (4 p r - q^2) de X^4 + p X^2 + q X + r

    Args:
        quartic: Quartique unitaire sans terme de degré 3 (coefficients dans Q[a])
        var: Variable de la quartique

    Returns:
        Cubique résolvante dans la même variable
    """
    coeffs = coefficients_in(quartic, var)
    if len(coeffs) != 5:
        raise AlgebraError("Résolvante: quartique requise")
    one, cubic, p_, q_, r_ = (c.as_expr() for c in coeffs)
    if sympy.simplify(one - 1) != 0 or sympy.simplify(cubic) != 0:
        raise AlgebraError("Résolvante: quartique unitaire réduite requise")
    expr = var**3 - p_ * var**2 - 4 * r_ * var + (4 * p_ * r_ - q_**2)
    return to_poly(sympy.expand(expr), *quartic.gens)


def theta_polynomial(N: int, var: Symbol, a) -> Poly:
    """Z^N + Z^(N-1) + a (a symbole ou rationnel)"""
    if N < 2:
        raise AlgebraError("N >= 2 requis")
    expr = var**N + var ** (N - 1) + a
    gens = (var, a) if isinstance(a, Symbol) else (var,)
    return to_poly(expr, *gens)


def theta_discriminant(N: int, a: Symbol) -> Poly:
    """Discriminant de Z^N + Z^(N-1) + a dans Q[a]"""
    return discriminant(theta_polynomial(N, Z, a), Z)


def univariate_coeffs(p: Poly) -> List[Fraction]:
    """Coefficients rationnels d'un polynôme univarié, degré décroissant"""
    live = [g for g in p.gens if p.degree(g) > 0]
    if len(live) > 1:
        raise AlgebraError(f"Polynôme non univarié: {format_poly(p)}")
    if not live:
        return [fraction_of(p.as_expr())]
    p = Poly(p.as_expr(), live[0], domain=QQ)
    return [fraction_of(c) for c in p.all_coeffs()]


def isolate_roots(p: Poly, precision_bits: int = 128, cap: int = PRECISION_CAP_BITS) -> List[ComplexBall]:
    """
    Isole les racines complexes distinctes d'un polynôme univarié rationnel

    Args:
        p: Polynôme univarié non nul
        precision_bits: Rayon cible 2^-precision_bits
        cap: Précision maximale (PrecisionCapError au-delà)

    Returns:
        Boules disjointes, une par racine distincte, triées (réel, imaginaire)
    """
    if p.is_zero:
        raise AlgebraError("Isolation des racines du polynôme nul")
    return isolate_poly_coeffs(univariate_coeffs(squarefree(p)), precision_bits, cap)


def specialize(p: Poly, values: Dict[Symbol, Fraction]) -> Poly:
    """Substitue des rationnels à certains générateurs"""
    subs = {g: sympy.Rational(v.numerator, v.denominator) for g, v in values.items() if g in p.gens}
    rest = [g for g in p.gens if g not in subs]
    expr = sympy.expand(p.as_expr().subs(subs))
    return _poly_over(expr, rest, p.gens[0])


def product(polys: Iterable[Poly], *gens: Symbol) -> Poly:
    """Produit de polynômes"""
    result = to_poly(1, *gens)
    for p in polys:
        result = to_poly(sympy.expand(result.as_expr() * p.as_expr()), *gens)
    return result
