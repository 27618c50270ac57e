#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Structures finies à prédicats unaires
© 2025 - Licence Apache 2.0

L_n-structures (univers fini et n prédicats unaires), construction
symétrique impair/pair, bijection Phi entre les réduits, symétrie et
recherche d'isomorphismes par profils d'appartenance.

Les éléments canoniques sont des sous-ensembles de {1..n} codés en
masques de bits (bit i-1 pour l'élément i), ordonnés par valeur.
"""

import itertools
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from .errors import CertificateError, SearchRefusedError
from .logger import get_logger

Bijection = Dict[int, int]

SEARCH_LIMIT = 12
EXHAUSTIVE_CROSS_CHECK = 8


def subset_text(mask: int) -> str:
    members = [str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1]
    return "{" + ",".join(members) + "}"


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class LStructure:
    """Univers fini et n prédicats unaires"""

    n: int
    universe: Tuple[int, ...]
    preds: Tuple[FrozenSet[int], ...]
    name: str = ""

    def __post_init__(self):
        if len(set(self.universe)) != len(self.universe):
            raise CertificateError("Éléments de l'univers non distincts")
        if len(self.preds) != self.n:
            raise CertificateError(f"{len(self.preds)} prédicats pour n = {self.n}")
        domain = set(self.universe)
        for i, p in enumerate(self.preds):
            if not p <= domain:
                raise CertificateError(f"Prédicat {i + 1} hors de l'univers")

    def __len__(self) -> int:
        return len(self.universe)

    def profile(self, element: int, keep: Optional[Sequence[int]] = None) -> Tuple[bool, ...]:
        """Vecteur d'appartenance aux prédicats d'indices keep"""
        indices = range(self.n) if keep is None else keep
        return tuple(element in self.preds[i] for i in indices)

    def intersection(self) -> FrozenSet[int]:
        if not self.preds:
            return frozenset(self.universe)
        return frozenset.intersection(*self.preds)

    def relabel(self, order: Sequence[int], name: str = "") -> "LStructure":
        """Structure de prédicats preds[order[0]], preds[order[1]], ..."""
        return LStructure(len(order), self.universe, tuple(self.preds[i] for i in order), name or self.name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "n": self.n,
            "universe": list(self.universe),
            "preds": [sorted(p) for p in self.preds],
        }


def _parity_structure(n: int, parity: int, name: str) -> LStructure:
    if n < 2:
        raise CertificateError(f"n >= 2 requis (n = {n})")
    universe = tuple(m for m in range(1 << n) if popcount(m) % 2 == parity)
    preds = tuple(frozenset(m for m in universe if m >> i & 1) for i in range(n))
    return LStructure(n, universe, preds, name)


def build_X(n: int) -> LStructure:
    """Sous-ensembles de {1..n} de cardinal impair ; X_i = {alpha : i dans alpha}"""
    return _parity_structure(n, 1, "X")


def build_Y(n: int) -> LStructure:
    """Sous-ensembles de {1..n} de cardinal pair ; Y_i = {beta : i dans beta}"""
    return _parity_structure(n, 0, "Y")


def toggle_map(n: int, j: int) -> Bijection:
    """Bascule de l'élément j+1 sur les sous-ensembles impairs (Phi pour j = n-1)"""
    bit = 1 << j
    return {m: m ^ bit for m in range(1 << n) if popcount(m) % 2 == 1}


def phi(n: int) -> Bijection:
    """Phi(alpha) = alpha privé de n si n est dans alpha, alpha union {n} sinon"""
    return toggle_map(n, n - 1)


def is_isomorphism(s: LStructure, t: LStructure, f: Bijection, keep: Optional[Sequence[int]] = None) -> bool:
    """f bijection de s sur t respectant les prédicats d'indices keep"""
    if sorted(f) != sorted(s.universe) or sorted(f.values()) != sorted(t.universe):
        return False
    indices = range(s.n) if keep is None else keep
    return all((g in s.preds[i]) == (f[g] in t.preds[i]) for g in s.universe for i in indices)


@dataclass
class SearchStats:
    nodes: int = 0


def search_iso(
    s: LStructure, t: LStructure, keep: Optional[Sequence[int]] = None, stats: Optional[SearchStats] = None
) -> Optional[Bijection]:
    """
    Recherche exhaustive d'une bijection respectant les prédicats de keep

    Élagage : les multiensembles de profils doivent coïncider, puis chaque
    élément n'est envoyé que sur un élément de même profil.

    Raises:
        SearchRefusedError: univers de plus de SEARCH_LIMIT éléments
    """
    if len(s) != len(t):
        return None
    if len(s) > SEARCH_LIMIT:
        raise SearchRefusedError(f"Univers de {len(s)} éléments: recherche refusée")
    stats = stats or SearchStats()
    source = {g: s.profile(g, keep) for g in s.universe}
    target = {g: t.profile(g, keep) for g in t.universe}
    if sorted(source.values()) != sorted(target.values()):
        return None

    elements = list(s.universe)
    used = set()
    assignment: Bijection = {}

    def extend(k: int) -> bool:
        stats.nodes += 1
        if k == len(elements):
            return True
        g = elements[k]
        for h in t.universe:
            if h in used or target[h] != source[g]:
                continue
            used.add(h)
            assignment[g] = h
            if extend(k + 1):
                return True
            used.discard(h)
            del assignment[g]
        return False

    found = extend(0)
    return dict(assignment) if found else None


def permutation_count(s: LStructure, t: LStructure, keep: Optional[Sequence[int]] = None) -> int:
    """Nombre de bijections respectant keep (énumération brute, univers <= 8)"""
    if len(s) != len(t):
        return 0
    if len(s) > EXHAUSTIVE_CROSS_CHECK:
        raise SearchRefusedError(f"Énumération brute refusée ({len(s)} éléments)")
    count = 0
    for image in itertools.permutations(t.universe):
        f = dict(zip(s.universe, image))
        if is_isomorphism(s, t, f, keep):
            count += 1
    return count


@dataclass
class SymmetryReport:
    symmetric: bool
    witnesses: Dict[str, Bijection]
    failures: List[Tuple[int, ...]]
    induced: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "symmetric": self.symmetric,
            "permutations": len(self.witnesses) + len(self.failures),
            "induced_witnesses": self.induced,
            "failures": [list(p) for p in self.failures],
        }


def _induced(sigma: Sequence[int], mask: int) -> int:
    image = 0
    for i, j in enumerate(sigma):
        if mask >> i & 1:
            image |= 1 << j
    return image


def is_symmetric(s: LStructure) -> SymmetryReport:
    """
    Pour chaque permutation sigma des indices, une bijection sigma~ de
    l'univers avec gamma dans F_i si et seulement si sigma~(gamma) dans F_sigma(i)

    L'action induite sur les sous-ensembles est essayée d'abord, puis la
    recherche exhaustive.
    """
    witnesses: Dict[str, Bijection] = {}
    failures: List[Tuple[int, ...]] = []
    induced = 0
    for sigma in itertools.permutations(range(s.n)):
        candidate = {g: _induced(sigma, g) for g in s.universe}
        if _respects(s, candidate, sigma):
            witnesses[str(sigma)] = candidate
            induced += 1
            continue
        found = search_iso(s, s.relabel(sigma))
        if found is not None and _respects(s, found, sigma):
            witnesses[str(sigma)] = found
        else:
            failures.append(sigma)
    return SymmetryReport(not failures, witnesses, failures, induced)


def _respects(s: LStructure, f: Bijection, sigma: Sequence[int]) -> bool:
    universe = set(s.universe)
    if set(f.values()) != universe or set(f) != universe:
        return False
    return all((g in s.preds[i]) == (f[g] in s.preds[sigma[i]]) for g in s.universe for i in range(s.n))


def find_reduct_iso(s: LStructure, t: LStructure, keep: Sequence[int]) -> Optional[Bijection]:
    """
    Isomorphisme des réduits aux prédicats d'indices keep

    Pour la paire impair/pair privée du seul indice j, la bascule de j
    (Phi pour j = n) est vérifiée directement avant toute recherche.
    """
    keep = list(keep)
    if len(keep) > s.n or len(s) != len(t):
        return None
    dropped = sorted(set(range(s.n)) - set(keep))
    if s.name == "X" and t.name == "Y" and s.n == t.n and len(dropped) == 1:
        candidate = toggle_map(s.n, dropped[0])
        if is_isomorphism(s, t, candidate, keep):
            return candidate
        get_logger("Structures").warning("Bascule non isomorphe sur les réduits", {"n": s.n, "dropped": dropped[0] + 1})
    return search_iso(s, t, keep)


@dataclass
class IsoCertificate:
    """ISO (bijection) ou NONISO (raison), avec recoupement exhaustif"""

    status: str
    reason: str
    bijection: Optional[Bijection] = None
    intersections: Optional[Tuple[int, int]] = None
    exhaustive_count: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "reason": self.reason,
            "bijection": (
                {subset_text(k): subset_text(v) for k, v in sorted(self.bijection.items())}
                if self.bijection is not None else None
            ),
            "intersections": list(self.intersections) if self.intersections else None,
            "exhaustive_count": self.exhaustive_count,
        }


def full_iso_certificate(s: LStructure, t: LStructure) -> IsoCertificate:
    """
    Décide l'isomorphisme des structures complètes

    Chemin rapide : exactement une des intersections de tous les prédicats
    est vide. Pour un univers d'au plus 8 éléments, l'énumération brute est
    aussi exécutée et doit concorder.

    Raises:
        SearchRefusedError: univers de plus de 12 éléments sans décision rapide
        CertificateError: désaccord entre les deux chemins
    """
    if len(s) != len(t) or s.n != t.n:
        return IsoCertificate("NONISO", "cardinaux ou signatures différents")
    cap_s, cap_t = s.intersection(), t.intersection()
    fast: Optional[IsoCertificate] = None
    if bool(cap_s) != bool(cap_t):
        fast = IsoCertificate(
            "NONISO",
            "une seule des intersections de tous les prédicats est non vide",
            intersections=(len(cap_s), len(cap_t)),
        )
    if fast is not None and len(s) > EXHAUSTIVE_CROSS_CHECK:
        return fast
    if fast is None and len(s) > SEARCH_LIMIT:
        raise SearchRefusedError(f"Univers de {len(s)} éléments sans décision rapide")

    found = search_iso(s, t)
    if len(s) <= EXHAUSTIVE_CROSS_CHECK:
        count = permutation_count(s, t)
        if (count > 0) != (found is not None):
            raise CertificateError("Recherche élaguée et énumération brute en désaccord")
    else:
        count = None
    if fast is not None:
        if found is not None:
            raise CertificateError("Test des intersections contredit par la recherche")
        fast.exhaustive_count = count
        return fast
    if found is None:
        return IsoCertificate("NONISO", "aucune bijection (recherche exhaustive)", exhaustive_count=count)
    return IsoCertificate("ISO", "bijection trouvée", bijection=found, exhaustive_count=count)
