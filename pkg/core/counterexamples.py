#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Contre-exemples exécutables
© 2025 - Licence Apache 2.0

Configurations triangle/étoile des racines de X^4 + X + a0 et relation
ternaire T(s1, s2, s3) = Ey (R(y, s1) et R(y, s2) et R(y, s3)), où
R(y, s) dit qu'il existe z != y avec y^4 + y = z^4 + z et s = y + z.

Relations S', T' sur les sommes de racines de Z^N + Z^(N-1) + a0 indexées
par les structures impair/pair, non-vacuité de S' et non T', témoins
combinatoires lambda et binarisation par la relation R(u, v).
"""

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

import sympy
from sympy import Poly, Symbol
from tqdm import tqdm

from .algebra import resultant, to_poly, univariate_coeffs
from .algebraic import AlgebraicNumber, alg_equal, alg_scale, vanishes_at
from .balls import PRECISION_CAP_BITS, ComplexBall, horner, isolate_ball_poly
from .errors import AlgebraError, CertificateError, PrecisionCapError
from .logger import get_logger
from .report import CheckResult
from .structures import Bijection, LStructure, build_X, build_Y, find_reduct_iso, is_isomorphism
from .theta import ConfigEntry, ConfigTuple, SubsetSumIndex, ThetaContext, subset_mask, subset_sum_injective

Y = Symbol("y")
S = Symbol("s")

AUTOMORPHISM_GAP = (
    "L'extension de la bijection des racines en automorphisme n'a pas de "
    "certificat fini en a0 rationnel : seuls le témoin lambda et le "
    "certificat galoisien sont vérifiés."
)


# -- relation R(y, s) ----------------------------------------------------------

def r_locus_poly(s=S) -> Poly:
    """
    (s - y)^4 + (s - y) - (y^4 + y) développé :
    -4 s y^3 + 6 s^2 y^2 - (4 s^3 + 2) y + s^4 + s

    Args:
        s: Symbole (défaut S) ou rationnel

    Returns:
        Poly en (y, s) ou en y seul si s est rationnel
    """
    if isinstance(s, Symbol):
        value = s
    else:
        q = Fraction(s)
        value = sympy.Rational(q.numerator, q.denominator)
    expr = sympy.expand((value - Y) ** 4 + (value - Y) - (Y**4 + Y))
    gens = (Y, s) if isinstance(s, Symbol) else (Y,)
    return to_poly(expr, *gens)


def r_locus_core() -> Poly:
    """
    Facteur de r_locus_poly hors du point exclu y = s/2 :
    2 s y^2 - 2 s^2 y + s^3 + 1 (courbe plane de R)
    """
    full = r_locus_poly(S)
    quotient, remainder = sympy.div(full.as_expr(), Y - S / 2, Y, S)
    if sympy.expand(remainder) != 0:
        raise AlgebraError("y = s/2 n'est pas racine du polynôme de R")
    return to_poly(sympy.expand(-quotient / 2), Y, S)


_R_COEFFS: Optional[List[List[Fraction]]] = None


def _r_coeffs_in_s() -> List[List[Fraction]]:
    """Coefficients en y de r_locus_poly, chacun univarié en s (degré décroissant)"""
    global _R_COEFFS
    if _R_COEFFS is None:
        full = r_locus_poly(S)
        _R_COEFFS = [univariate_coeffs(to_poly(c, S)) for c in Poly(full.as_expr(), Y).all_coeffs()]
    return _R_COEFFS


def _locus_balls(entry: ConfigEntry, ctx: ThetaContext, bits: int) -> Optional[List[ComplexBall]]:
    """
    Lieu de R(., s) en boules à la précision bits, point exclu retiré

    Returns:
        None si la précision ne suffit pas à décider
    """
    s_ball = entry.ball(ctx, bits)
    if s_ball.contains_zero() or (s_ball**3 + 2).contains_zero():
        exact = entry.exact(ctx)
        if exact.is_rational and exact.rational_value == 0:
            return []
        if vanishes_at(to_poly(S**3 + 2, S), {S: exact}):
            # racine double y = s/2, exclue
            return []
        return None

    def coeffs_at(b: int) -> List[ComplexBall]:
        s = entry.ball(ctx, b)
        return [horner(c, s, b) for c in _r_coeffs_in_s()]

    roots = isolate_ball_poly(coeffs_at, bits)
    half = s_ball.scale(Fraction(1, 2))
    excluded = [r for r in roots if r.overlaps(half)]
    if len(excluded) != 1:
        return None
    return [r for r in roots if r is not excluded[0]]


@dataclass
class TCheck:
    """Décision de T sur un triplet : témoin exact ou séparation certifiée"""

    holds: bool
    bits: int
    witness: Optional[AlgebraicNumber] = None
    separation: Optional[Fraction] = None
    reason: str = ""
    loci: List[List[ComplexBall]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "holds": self.holds,
            "bits": self.bits,
            "reason": self.reason,
            "witness": self.witness.to_dict() if self.witness is not None else None,
            "separation": float(self.separation) if self.separation is not None else None,
            "loci": [[b.to_dict() for b in locus] for locus in self.loci],
        }


def _confirm_witness(config: ConfigTuple, candidate: ComplexBall) -> Optional[AlgebraicNumber]:
    """Point commun exact des trois lieux dans la boule candidate, ou None"""
    core = r_locus_core()
    exact_s = [config.exact(i) for i in range(len(config))]
    eliminated = None
    for s_value in exact_s:
        minimal = s_value.minimal().minpoly
        g = resultant(to_poly(minimal.as_expr().subs(minimal.gens[0], S), S), core, S)
        g = to_poly(g.as_expr(), Y)
        eliminated = g if eliminated is None else to_poly(sympy.gcd(eliminated.as_expr(), g.as_expr()), Y)
    if eliminated is None or eliminated.degree() <= 0:
        return None
    for y in AlgebraicNumber.roots_of(eliminated):
        if not y.box.overlaps(candidate):
            continue
        if all(
            vanishes_at(core, {S: s_value, Y: y}) and not alg_equal(y, alg_scale(s_value, Fraction(1, 2)))
            for s_value in exact_s
        ):
            return y
    return None


def check_T(config: ConfigTuple, ctx: Optional[ThetaContext] = None, cap: int = PRECISION_CAP_BITS) -> TCheck:
    """
    Décide T(s1, s2, s3)

    Lieux de R par isolation certifiée à coefficients boules, point y = s/2
    retiré ; intersection triple des boules à précision croissante, point
    commun confirmé exactement (élimination puis test d'annulation).

    Raises:
        PrecisionCapError: décision impossible sous la précision maximale
    """
    ctx = ctx or config.ctx
    if len(config) != 3:
        raise CertificateError("T est ternaire")
    logger = get_logger("CheckT")
    bits = ctx.precision_bits
    while bits <= cap:
        loci = [_locus_balls(e, ctx, bits) for e in config.entries]
        if any(locus is None for locus in loci):
            logger.log_escalation("check_T", bits * 2)
            bits *= 2
            continue
        if not loci[0] or not loci[1] or not loci[2]:
            return TCheck(False, bits, reason="lieu vide", loci=loci)
        candidates = [y for y in loci[0] if all(any(y.overlaps(z) for z in locus) for locus in loci[1:])]
        if not candidates:
            separation = min(
                max(min(y.gap_lower(z) for z in locus) for locus in loci[1:]) for y in loci[0]
            )
            return TCheck(False, bits, separation=separation, reason="séparation certifiée", loci=loci)
        for candidate in candidates:
            witness = _confirm_witness(config, candidate)
            if witness is not None:
                return TCheck(True, bits, witness=witness, reason="point commun exact", loci=loci)
        logger.log_escalation("check_T", bits * 2, candidates=len(candidates))
        bits *= 2
    raise PrecisionCapError("Décision de T", cap)


# -- Exemple triangle / étoile ----------------------------------------------------

def triangle_star_configs(ctx: ThetaContext) -> Tuple[ConfigTuple, ConfigTuple]:
    """
    Triangle s_i = z_i + z_4 (i = 1..3) et étoile s'_i = somme des deux
    racines parmi z_1, z_2, z_3 autres que z_i

    Raises:
        CertificateError: contexte autre que X^4 + X + a0
    """
    if ctx.family != "quartic":
        raise CertificateError("Configurations triangle/étoile: contexte quartique requis")
    triangle = ConfigTuple.from_subsets(ctx, [(i, 3) for i in range(3)], "triangle")
    star = ConfigTuple.from_subsets(
        ctx, [tuple(j for j in range(3) if j != i) for i in range(3)], "star"
    )
    return triangle, star


def relabeled_stars(star: ConfigTuple) -> List[ConfigTuple]:
    """Les 6 réordonnancements de l'étoile"""
    return [
        star.permuted(order, label=f"star{''.join(str(i + 1) for i in order)}")
        for order in itertools.permutations(range(len(star)))
    ]


def pair_conjugacy_witnesses(triangle: ConfigTuple, star: ConfigTuple) -> List[Dict[str, Any]]:
    """
    Pour tous i != j et k != l, une permutation des quatre racines envoyant
    les indices de (s_i, s_j) sur ceux de (s'_k, s'_l)

    Avec Gal = S4, ces permutations se prolongent en automorphismes : les
    paires sont conjuguées.
    """
    witnesses = []
    pairs = list(itertools.permutations(range(3), 2))
    perms = list(itertools.permutations(range(4)))
    for i, j in pairs:
        for k, l in pairs:
            source = (set(triangle.entries[i].subset), set(triangle.entries[j].subset))
            target = (set(star.entries[k].subset), set(star.entries[l].subset))
            found = next(
                (p for p in perms if {p[x] for x in source[0]} == target[0] and {p[x] for x in source[1]} == target[1]),
                None,
            )
            if found is None:
                raise CertificateError(f"Paires ({i + 1},{j + 1}) et ({k + 1},{l + 1}) non conjuguées")
            witnesses.append({
                "triangle_pair": [i + 1, j + 1],
                "star_pair": [k + 1, l + 1],
                "permutation": [x + 1 for x in found],
            })
    return witnesses


# -- Structures S', T' et binarisation ----------------------------------------

def canonical_bijection(structure: LStructure) -> Bijection:
    return {g: i for i, g in enumerate(structure.universe)}


def build_sum_tuples(
    n: int, ctx: ThetaContext, phi_map: Optional[Bijection] = None, psi_map: Optional[Bijection] = None
) -> Tuple[ConfigTuple, ConfigTuple]:
    """
    s_i = somme de phi(alpha) pour alpha dans X_i, t_i = somme de psi(beta)
    pour beta dans Y_i

    Args:
        n: Nombre de prédicats
        ctx: Contexte de N = 2^(n-1) racines
        phi_map, psi_map: Bijections univers -> indices de racines (canoniques par défaut)
    """
    X, Yst = build_X(n), build_Y(n)
    if ctx.N != len(X):
        raise CertificateError(f"N = {ctx.N} au lieu de {len(X)}")
    phi_map = phi_map or canonical_bijection(X)
    psi_map = psi_map or canonical_bijection(Yst)
    s = ConfigTuple.from_subsets(ctx, [[phi_map[a] for a in p] for p in X.preds], "s", bijection="phi")
    t = ConfigTuple.from_subsets(ctx, [[psi_map[b] for b in p] for p in Yst.preds], "t", bijection="psi")
    return s, t


def _target_masks(index: SubsetSumIndex, config: ConfigTuple) -> List[Set[int]]:
    return [{subset_mask(A) for A in index.matching(e)} for e in config.entries]


def exhaustive_bijection_search(
    structure: LStructure, targets: Sequence[Set[int]], progress: bool = False, stop_at_first: bool = False
) -> Tuple[int, int, Optional[Bijection]]:
    """
    Énumère toutes les bijections psi : univers -> racines et compte celles
    dont chaque image psi(F_i) est un sous-ensemble de somme cible

    Returns:
        (candidats examinés, bijections conformes, premier témoin)
    """
    universe = list(structure.universe)
    preds = [list(p) for p in structure.preds]
    checked = 0
    matches = 0
    first: Optional[Bijection] = None
    total = 1
    for k in range(2, len(universe) + 1):
        total *= k
    for image in tqdm(itertools.permutations(range(len(universe))), total=total, disable=not progress, desc="psi"):
        checked += 1
        psi = dict(zip(universe, image))
        ok = True
        for members, allowed in zip(preds, targets):
            mask = 0
            for b in members:
                mask |= 1 << psi[b]
            if mask not in allowed:
                ok = False
                break
        if ok:
            matches += 1
            if first is None:
                first = psi
            if stop_at_first:
                break
    return checked, matches, first


def claim_B_check(n: int, ctx: ThetaContext, rerun: bool = True, progress: bool = False) -> CheckResult:
    """
    S' et non T' non vide, T' satisfaisable

    phi canonique donne le tuple s ; toutes les bijections psi : Y -> racines
    sont examinées, aucune ne doit reproduire s. La recherche est refaite à
    précision double et doit concorder.
    """
    logger = get_logger("ClaimB")
    started = time.perf_counter()
    X, Yst = build_X(n), build_Y(n)
    k = len(X.preds[0])
    if any(len(p) != k for p in list(X.preds) + list(Yst.preds)):
        raise CertificateError("Prédicats de cardinaux différents")
    if len(X) > 8:
        raise CertificateError(f"N = {len(X)} > 8: recherche exhaustive hors d'échelle")

    injectivity = subset_sum_injective(ctx, k)
    details: Dict[str, Any] = {
        "n": n,
        "N": ctx.N,
        "a0": str(ctx.a0),
        "k": k,
        "injective": injectivity.injective,
        "notes": [AUTOMORPHISM_GAP],
    }
    if not injectivity.injective:
        details["verdict"] = "a0 non générique, en choisir un autre"
        return CheckResult("claimB", False, details, (time.perf_counter() - started) * 1000)

    s, t = build_sum_tuples(n, ctx)
    index = SubsetSumIndex(ctx, k)
    s_targets = _target_masks(index, s)
    t_targets = _target_masks(index, t)

    checked, matches, _ = exhaustive_bijection_search(Yst, s_targets, progress)
    _, _, t_witness = exhaustive_bijection_search(Yst, t_targets, stop_at_first=True)
    _, _, inversion = exhaustive_bijection_search(X, s_targets, stop_at_first=True)

    agree = True
    if rerun:
        doubled = ThetaContext(ctx.N, ctx.a0, ctx.family, ctx.precision_bits * 2, ctx.escalation_factor)
        s2, _ = build_sum_tuples(n, doubled)
        _, matches2, _ = exhaustive_bijection_search(Yst, _target_masks(SubsetSumIndex(doubled, k), s2))
        agree = matches2 == matches
        details["rerun_bits"] = doubled.precision_bits

    passed = matches == 0 and t_witness is not None and inversion is not None and agree
    details.update({
        "candidates_checked": checked,
        "matching_psi": matches,
        "t_prime_satisfiable": t_witness is not None,
        "inversion_with_X_matches": inversion is not None,
        "rerun_agrees": agree,
        "min_separation": float(injectivity.min_separation) if injectivity.min_separation is not None else None,
        "s": s.to_dict(),
    })
    duration = (time.perf_counter() - started) * 1000
    logger.log_certificate("claimB", "PASS" if passed else "FAIL", n=n, candidates=checked, matches=matches)
    logger.log_performance("claim_B_check", duration, n=n)
    return CheckResult(f"claimB[n={n}]", passed, details, duration)


def lambda_witness_check(n: int, sigma: Sequence[int], tau: Sequence[int]) -> Bijection:
    """
    Bijection lambda : X -> Y envoyant X_sigma(i) sur Y_tau(i) pour i = 1..n-1

    Args:
        sigma, tau: Injections {0..n-2} -> {0..n-1} (indices de prédicats)

    Raises:
        CertificateError: aucun témoin (contredit la symétrie des structures)
    """
    X, Yst = build_X(n), build_Y(n)
    sigma, tau = list(sigma), list(tau)
    if len(sigma) != n - 1 or len(set(sigma)) != n - 1 or len(tau) != n - 1 or len(set(tau)) != n - 1:
        raise CertificateError("sigma et tau doivent être des injections de {1..n-1} dans {1..n}")
    if sigma == tau:
        found = find_reduct_iso(X, Yst, sigma)
    else:
        found = find_reduct_iso(X.relabel(sigma, "X_sigma"), Yst.relabel(tau, "Y_tau"), list(range(n - 1)))
    if found is None or not is_isomorphism(
        X.relabel(sigma, "X_sigma"), Yst.relabel(tau, "Y_tau"), found, list(range(n - 1))
    ):
        raise CertificateError(f"Pas de témoin lambda pour sigma={sigma}, tau={tau}")
    return found


def lambda_witness_suite(n: int, all_pairs: bool = True) -> CheckResult:
    """Témoins lambda pour toutes les paires (sigma, tau) (ou sigma = tau seulement)"""
    started = time.perf_counter()
    injections = list(itertools.permutations(range(n), n - 1))
    pairs = [(s, t) for s in injections for t in injections] if all_pairs else [(s, s) for s in injections]
    failures = []
    for sigma, tau in pairs:
        try:
            lambda_witness_check(n, sigma, tau)
        except CertificateError as e:
            failures.append({"sigma": list(sigma), "tau": list(tau), "error": str(e)})
    duration = (time.perf_counter() - started) * 1000
    return CheckResult(
        f"lambda[n={n}]",
        not failures,
        {"n": n, "pairs": len(pairs), "failures": failures, "notes": [AUTOMORPHISM_GAP]},
        duration,
    )


def relation_R(index: SubsetSumIndex, u: ConfigEntry, v: int) -> bool:
    """
    R(u, v) : u est la somme de k racines distinctes dont v

    Pour v racine du contexte, Z^N + Z^(N-1) - (v^N + v^(N-1)) est le
    polynôme du contexte : énumération de ses sous-ensembles de racines.
    """
    return any(v in A for A in index.matching(u))


def _find_bijection(domain: Sequence[int], allowed: Dict[int, Set[int]]) -> Optional[Bijection]:
    order = sorted(domain, key=lambda g: len(allowed[g]))
    used: Set[int] = set()
    assignment: Bijection = {}

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        g = order[k]
        for r in sorted(allowed[g]):
            if r in used:
                continue
            used.add(r)
            assignment[g] = r
            if extend(k + 1):
                return True
            used.discard(r)
            del assignment[g]
        return False

    return dict(assignment) if extend(0) else None


def binary_relation_holds(structure: LStructure, config: ConfigTuple, index: SubsetSumIndex) -> Tuple[bool, bool]:
    """
    S (ou T) : il existe des x_alpha distincts parmi les racines avec
    R(s_i, x_alpha) pour tout alpha dans F_i

    Returns:
        (valeur, même image) ; même image : chaque s_i admet au plus un
        sous-ensemble de racines de somme s_i
    """
    matching = [index.matching(e) for e in config.entries]
    roots = set(range(config.ctx.N))
    reach = [set().union(*[set(A) for A in M]) if M else set() for M in matching]
    allowed = {}
    for g in structure.universe:
        candidates = set(roots)
        for i, p in enumerate(structure.preds):
            if g in p:
                candidates &= reach[i]
        allowed[g] = candidates
    same_range = all(len(M) <= 1 for M in matching)
    return _find_bijection(structure.universe, allowed) is not None, same_range


def sum_relation_holds(structure: LStructure, config: ConfigTuple, index: SubsetSumIndex) -> bool:
    """S' (ou T') : une bijection phi avec s_i = somme de phi(F_i)"""
    matching = [index.matching(e) for e in config.entries]
    if any(not M for M in matching):
        return False
    for choice in itertools.product(*matching):
        images = [set(A) for A in choice]
        allowed = {
            g: {r for r in range(config.ctx.N) if all((r in images[i]) == (g in p) for i, p in enumerate(structure.preds))}
            for g in structure.universe
        }
        if _find_bijection(structure.universe, allowed) is not None:
            return True
    return False


def binarization_check(n: int, ctx: ThetaContext, min_negatives: int = 20, max_generated: int = 24) -> CheckResult:
    """
    S <=> S' et T <=> T' sur une batterie de tuples

    Tuples engendrés par toutes les bijections (S' ou T' vrai), leurs
    perturbations s_i + 1 (S' faux), et les tuples T' pris comme négatifs
    de S'.
    """
    logger = get_logger("Binarization")
    started = time.perf_counter()
    X, Yst = build_X(n), build_Y(n)
    if ctx.N != len(X) or ctx.N > 8:
        raise CertificateError(f"N = {ctx.N} incompatible (2^(n-1) <= 8 requis)")
    k = len(X.preds[0])
    index = SubsetSumIndex(ctx, k)

    generated_s: List[ConfigTuple] = []
    generated_t: List[ConfigTuple] = []
    seen = set()
    for image in itertools.permutations(range(ctx.N)):
        s, t = build_sum_tuples(n, ctx, dict(zip(X.universe, image)), dict(zip(Yst.universe, image)))
        key = tuple(e.subset for e in s.entries)
        if key in seen:
            continue
        seen.add(key)
        generated_s.append(s)
        generated_t.append(t)
        if len(generated_s) >= max_generated:
            break

    perturbed: List[ConfigTuple] = []
    shift = 1
    while len(perturbed) < min_negatives:
        for s in generated_s:
            for i in range(n):
                perturbed.append(s.shifted(i, shift, label=f"s+{shift}@{i + 1}"))
            if len(perturbed) >= min_negatives:
                break
        shift += 1

    battery: List[Tuple[str, ConfigTuple]] = (
        [("s_generated", s) for s in generated_s]
        + [("t_generated", t) for t in generated_t]
        + [("perturbed", p) for p in perturbed]
    )
    rows = []
    mismatches = []
    for kind, config in battery:
        s_bin, s_range = binary_relation_holds(X, config, index)
        s_sum = sum_relation_holds(X, config, index)
        t_bin, t_range = binary_relation_holds(Yst, config, index)
        t_sum = sum_relation_holds(Yst, config, index)
        row = {
            "kind": kind,
            "S": s_bin, "S_prime": s_sum, "T": t_bin, "T_prime": t_sum,
            "same_range": s_range and t_range,
        }
        rows.append(row)
        if s_bin != s_sum or t_bin != t_sum:
            mismatches.append({**row, "tuple": config.to_dict()})

    expectations = (
        all(r["S_prime"] for r in rows if r["kind"] == "s_generated")
        and all(r["T_prime"] for r in rows if r["kind"] == "t_generated")
        and not any(r["S_prime"] for r in rows if r["kind"] == "perturbed")
    )
    negatives = sum(1 for r in rows if not r["S_prime"])
    passed = not mismatches and expectations and negatives >= min_negatives
    duration = (time.perf_counter() - started) * 1000
    details = {
        "n": n,
        "N": ctx.N,
        "a0": str(ctx.a0),
        "k": k,
        "tuples": len(rows),
        "negatives": negatives,
        "mismatches": mismatches,
        "expectations_met": expectations,
        "same_range_everywhere": all(r["same_range"] for r in rows),
        "R_example": relation_R(index, ConfigEntry((0, 1)), 0) if k == 2 else None,
    }
    logger.log_certificate("binarization", "PASS" if passed else "FAIL", n=n, tuples=len(rows), negatives=negatives)
    logger.log_performance("binarization_check", duration, n=n)
    return CheckResult(f"binarize[n={n}]", passed, details, duration)
