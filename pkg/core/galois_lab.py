#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Certificats galoisiens
© 2025 - Licence Apache 2.0

Certificats vérifiables du groupe de Galois S4 de X^4 + X + a : sur Q(a)
(critère quartique irréductible, résolvante cubique irréductible,
discriminant non carré) et en un rationnel a0 fixé.

La preuve par le système de factorisation quadratique
    (i) a1 + a2 = 0      (ii) b2 + a1 a2 + b1 = 0
    (iii) a1 b2 + a2 b1 = 1      (iv) b1 b2 = a
est remplacée ici par le certificat de Gauss pour un polynôme de degré 1
en a : c1(X) a + c0(X) est irréductible si pgcd(c1, c0) est constant.
"""

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np
import sympy
from sympy import Poly, Symbol

from .algebra import (
    degree_in,
    discriminant,
    format_poly,
    integer_quadratic_factor,
    is_rational_square,
    isolate_roots,
    linear_in_a_irreducible,
    perfect_square_test,
    rational_roots,
    resolvent_cubic,
    specialize,
    to_poly,
    univariate_coeffs,
)
from .errors import AlgebraError, CertificateError
from .logger import get_logger

X = Symbol("X")
A = Symbol("a")

PASS = "PASS"
FAIL = "FAIL"

# premiers essayés pour le raccourci d'irréductibilité modulo p
SHORTCUT_PRIMES = (2, 3, 5, 7, 11, 13)


@dataclass
class SubCheck:
    """Sous-vérification avec entrées et sorties en clair"""

    name: str
    status: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    outputs: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "status": self.status, "inputs": self.inputs, "outputs": self.outputs}


@dataclass
class S4Certificate:
    """Certificat Gal = S4 (corps de fonctions ou spécialisation rationnelle)"""

    context: str
    quartic_irreducible: SubCheck
    resolvent_irreducible: SubCheck
    disc_nonsquare: SubCheck
    discriminant: str
    cross_checks: List[SubCheck] = field(default_factory=list)

    @property
    def checks(self) -> List[SubCheck]:
        return [self.quartic_irreducible, self.resolvent_irreducible, self.disc_nonsquare]

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks) and all(c.passed for c in self.cross_checks)

    @property
    def status(self) -> str:
        return PASS if self.valid else FAIL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "context": self.context,
            "status": self.status,
            "discriminant": self.discriminant,
            "quartic_irreducible": self.quartic_irreducible.to_dict(),
            "resolvent_irreducible": self.resolvent_irreducible.to_dict(),
            "disc_nonsquare": self.disc_nonsquare.to_dict(),
            "cross_checks": [c.to_dict() for c in self.cross_checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)


def quartic_family() -> Poly:
    """X^4 + X + a dans Q[X, a]"""
    return to_poly(X**4 + X + A, X, A)


def resolvent_cubic_of_quartic(quartic: Optional[Poly] = None) -> Poly:
    """
    Cubique résolvante de la famille X^4 + X + a

    Returns:
        X^3 - 4 a X - 1 dans Q[X, a]
    """
    quartic = quartic if quartic is not None else quartic_family()
    cubic = resolvent_cubic(quartic, X)
    return to_poly(cubic.as_expr(), X, A)


def _linear_check(name: str, p: Poly) -> SubCheck:
    try:
        irreducible = linear_in_a_irreducible(p, A)
    except AlgebraError as e:
        raise CertificateError(f"{name}: {e}") from e
    c1, c0 = (to_poly(c.as_expr(), X) for c in _a_coefficients(p))
    gcd = sympy.gcd(c1.as_expr(), c0.as_expr())
    return SubCheck(
        name=name,
        status=PASS if irreducible else FAIL,
        inputs={"polynomial": format_poly(p), "method": "linear_in_a_coprime"},
        outputs={"c1": str(c1.as_expr()), "c0": str(c0.as_expr()), "gcd": str(gcd)},
    )


def _a_coefficients(p: Poly) -> List[Poly]:
    expr = sympy.expand(p.as_expr())
    return [to_poly(expr.coeff(A, 1), X), to_poly(expr.coeff(A, 0), X)]


def s4_over_function_field(quartic: Optional[Poly] = None) -> S4Certificate:
    """
    Certificat Gal(X^4 + X + a / Q(a)) = S4

    Args:
        quartic: Polynôme de la famille (X^4 + X + a par défaut), degré 1 en a exigé

    Returns:
        Certificat aux trois sous-vérifications exactes

    Raises:
        CertificateError: précondition du certificat linéaire non remplie
    """
    logger = get_logger("Galois")
    started = time.perf_counter()
    quartic = quartic if quartic is not None else quartic_family()
    if degree_in(quartic, A) != 1:
        raise CertificateError(f"Précondition: degré 1 en a requis ({format_poly(quartic)})")

    quartic_check = _linear_check("quartic_irreducible", quartic)
    cubic = resolvent_cubic_of_quartic(quartic)
    resolvent_check = _linear_check("resolvent_irreducible", cubic)

    disc = discriminant(quartic, X)
    disc_poly = to_poly(disc.as_expr(), A)
    square = perfect_square_test(disc_poly)
    disc_check = SubCheck(
        name="disc_nonsquare",
        status=FAIL if square else PASS,
        inputs={"discriminant": format_poly(disc_poly), "method": "perfect_square_test"},
        outputs={"degree": disc_poly.degree(), "is_square": square},
    )
    cert = S4Certificate(
        context="function-field",
        quartic_irreducible=quartic_check,
        resolvent_irreducible=resolvent_check,
        disc_nonsquare=disc_check,
        discriminant=format_poly(disc_poly),
    )
    logger.log_certificate("s4_over_function_field", cert.status, discriminant=cert.discriminant)
    logger.log_performance("s4_over_function_field", (time.perf_counter() - started) * 1000)
    return cert


def _integer_primitive(p: Poly) -> Poly:
    coeffs = univariate_coeffs(p)
    den = 1
    for c in coeffs:
        den = den * c.denominator // sympy.igcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    content = 0
    for c in ints:
        content = sympy.igcd(content, c)
    var = p.gens[0]
    return Poly(sum(c // content * var ** (len(ints) - 1 - i) for i, c in enumerate(ints)), var, domain=sympy.ZZ)


def _mod_p_irreducible(p: Poly) -> Optional[int]:
    """Premier p ne divisant pas le coefficient dominant et tel que p soit irréductible mod p"""
    lead = int(p.LC())
    for prime in SHORTCUT_PRIMES:
        if lead % prime == 0:
            continue
        reduced = Poly(p.as_expr(), p.gens[0], modulus=prime)
        if reduced.degree() == p.degree() and reduced.is_irreducible:
            return prime
    return None


def quartic_irreducible_over_q(p: Poly, use_mod_p: bool = True) -> SubCheck:
    """
    Irréductibilité sur Q d'une quartique univariée rationnelle

    Test des racines rationnelles puis recherche exhaustive d'un facteur
    quadratique entier dans la borne de Landau-Mignotte ; le raccourci
    modulo p dispense de la recherche quand il aboutit.
    """
    integral = _integer_primitive(p)
    inputs = {"polynomial": str(integral.as_expr()), "method": "rational_roots+quadratic_search"}
    roots = rational_roots(integral)
    if roots:
        return SubCheck("quartic_irreducible", FAIL, inputs, {"rational_roots": [str(r) for r in roots]})
    if use_mod_p:
        prime = _mod_p_irreducible(integral)
        if prime is not None:
            inputs["method"] = "rational_roots+mod_p"
            return SubCheck("quartic_irreducible", PASS, inputs, {"rational_roots": [], "irreducible_mod": prime})
    factor = integer_quadratic_factor(integral)
    if factor is not None:
        g, h = factor
        return SubCheck(
            "quartic_irreducible", FAIL, inputs,
            {"rational_roots": [], "factor": [str(g.as_expr()), str(h.as_expr())]},
        )
    return SubCheck("quartic_irreducible", PASS, inputs, {"rational_roots": [], "quadratic_factor": None})


def disc_nonsquare_check(value: Fraction) -> SubCheck:
    """Le discriminant spécialisé est non nul et n'est pas un carré de Q"""
    value = Fraction(value)
    square = is_rational_square(value)
    return SubCheck(
        name="disc_nonsquare",
        status=FAIL if (value == 0 or square) else PASS,
        inputs={"discriminant": str(value), "method": "integer_square_test"},
        outputs={"zero": value == 0, "is_square": square},
    )


def s4_at_rational(a0, use_mod_p: bool = True, precision_bits: int = 128) -> S4Certificate:
    """
    Certificat Gal(X^4 + X + a0 / Q) = S4 pour un rationnel a0

    Args:
        a0: Valeur rationnelle du paramètre
        use_mod_p: Autorise le raccourci d'irréductibilité modulo p
        precision_bits: Précision de la vérification croisée des racines

    Returns:
        Certificat ; FAIL si une sous-vérification échoue (a0 inutilisable)
    """
    logger = get_logger("Galois")
    started = time.perf_counter()
    a0 = Fraction(a0)
    values = {A: a0}
    quartic = to_poly(specialize(quartic_family(), values).as_expr(), X)
    cubic = to_poly(specialize(resolvent_cubic_of_quartic(), values).as_expr(), X)

    quartic_check = quartic_irreducible_over_q(quartic, use_mod_p=use_mod_p)
    cubic_roots = rational_roots(cubic)
    resolvent_check = SubCheck(
        name="resolvent_irreducible",
        status=FAIL if cubic_roots else PASS,
        inputs={"polynomial": format_poly(cubic), "method": "rational_roots"},
        outputs={"rational_roots": [str(r) for r in cubic_roots]},
    )
    disc_value = 256 * a0**3 - 27
    disc_check = disc_nonsquare_check(disc_value)

    cross: List[SubCheck] = []
    if quartic_check.passed and resolvent_check.passed and disc_check.passed:
        balls = isolate_roots(quartic, precision_bits)
        cross.append(SubCheck(
            name="roots_distinct",
            status=PASS if len(balls) == 4 else FAIL,
            inputs={"polynomial": format_poly(quartic), "precision_bits": precision_bits},
            outputs={"roots": [b.to_dict() for b in balls]},
        ))

    cert = S4Certificate(
        context=f"rational a = {a0}",
        quartic_irreducible=quartic_check,
        resolvent_irreducible=resolvent_check,
        disc_nonsquare=disc_check,
        discriminant=str(disc_value),
        cross_checks=cross,
    )
    logger.log_certificate("s4_at_rational", cert.status, a0=str(a0), discriminant=str(disc_value))
    logger.log_performance("s4_at_rational", (time.perf_counter() - started) * 1000, a0=str(a0))
    return cert


def s4_audit(n: int = 100, seed: int = 0, bound: int = 10, max_den: int = 20) -> Dict[str, Any]:
    """
    Audit statistique de la spécialisation : proportion de a0 aléatoires
    (dans [-bound, bound], dénominateur <= max_den) dont le certificat passe

    Le résultat est rapporté, jamais exigé.
    """
    logger = get_logger("Galois")
    rng = np.random.default_rng(seed)
    failures: List[str] = []
    passed = 0
    for _ in range(n):
        den = int(rng.integers(1, max_den + 1))
        num = int(rng.integers(-bound * den, bound * den + 1))
        a0 = Fraction(num, den)
        if s4_at_rational(a0).valid:
            passed += 1
        else:
            failures.append(str(a0))
    rate = passed / n if n else 0.0
    logger.info("Audit S4", {"samples": n, "passed": passed, "rate": f"{rate:.3f}"})
    return {"samples": n, "passed": passed, "rate": rate, "failures": failures, "seed": seed}
