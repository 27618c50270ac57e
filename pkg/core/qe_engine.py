#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Moteur d'élimination des quantificateurs
© 2025 - Licence Apache 2.0

Élimination de l'intérieur vers l'extérieur, bloc par bloc : un bloc
∃^{>=d} y (conjoints positifs et négés en y) se réduit par récurrence sur
le nombre de négations. Cas fini (comptage exact de l'union des conjoints
négés, réécrit par inclusion-exclusion), cas infini (substitution des
constantes du lieu de fibres infinies, une négation de moins), et cas de
base par regroupement autour des valeurs exceptionnelles de y. Chaque
application de règle est consignée dans une trace rejouable.
"""

import json
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import DnfExplosionError, OracleError, UnsupportedShapeError
from .formula import (
    DNF_CAP,
    FALSE,
    QUANTIFIERS,
    TRUE,
    And,
    Atom,
    CountAtLeast,
    CountExactly,
    CountInfinite,
    Equals,
    Exists,
    Formula,
    Not,
    Or,
    check_well_formed,
    children,
    dnf_disjuncts,
    free_vars,
    is_cylinder_combination,
    is_quantifier_free,
    normalize,
    rebuild_quantifier,
    simplify,
    substitute_constant,
    to_text,
)
from .logger import Logger
from .oracle import GeometricOracle

RULES = ("shape-(1)", "grouping", "positive", "finite-(4)", "infinite-(5)", "section-(6)", "inclexcl")

# Atome réservé marquant l'emplacement du résultat d'une sous-étape
HOLE = "_hole"


def hole(k: int) -> Atom:
    return Atom(HOLE, (f"h{k}",))


def fill_holes(template: Formula, outputs: Sequence[Formula]) -> Formula:
    """Remplace chaque trou h<k> par outputs[k], puis simplifie"""

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom):
            if g.symbol == HOLE:
                return outputs[int(g.args[0][1:])]
            return g
        if isinstance(g, Not):
            return Not(go(g.arg))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(go(a) for a in g.args))
        if isinstance(g, QUANTIFIERS):
            return rebuild_quantifier(g, go(g.body))
        return g

    return simplify(go(template))


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------


@dataclass
class TraceStep:
    """Application d'une règle : entrée, sortie, gabarit de recombinaison"""

    rule: str
    input: Formula
    output: Formula
    template: Optional[Formula] = None
    children: List["TraceStep"] = field(default_factory=list)
    prelude: List["TraceStep"] = field(default_factory=list)
    negations: Optional[int] = None

    @classmethod
    def combine(cls, rule: str, input: Formula, template: Formula, children: List["TraceStep"],
                negations: Optional[int] = None) -> "TraceStep":
        output = fill_holes(template, [c.output for c in children])
        return cls(rule, input, output, template, children, negations=negations)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "rule": self.rule,
            "input": to_text(self.input),
            "output": to_text(self.output),
        }
        if self.template is not None:
            data["template"] = to_text(self.template)
        if self.negations is not None:
            data["negations"] = self.negations
        if self.children:
            data["children"] = [c.to_dict() for c in self.children]
        if self.prelude:
            data["prelude"] = [c.to_dict() for c in self.prelude]
        return data

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children) + sum(c.size() for c in self.prelude)


@dataclass
class EliminationTrace:
    """Arbre des réécritures d'un appel à qe"""

    input: Formula
    output: Formula
    template: Formula
    steps: List[TraceStep] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input": to_text(self.input),
            "output": to_text(self.output),
            "template": to_text(self.template),
            "steps": [s.to_dict() for s in self.steps],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)


def replay_step(step: TraceStep) -> Formula:
    """Recalcule la sortie d'une étape à partir des sorties rejouées de ses enfants"""
    if step.template is None:
        return step.output
    return fill_holes(step.template, [replay_step(c) for c in step.children])


def replay_trace(trace: EliminationTrace) -> Formula:
    """Sortie de qe reconstruite en rejouant toutes les étapes"""
    return fill_holes(trace.template, [replay_step(s) for s in trace.steps])


def validate_trace(trace: EliminationTrace) -> List[str]:
    """
    Contrôle une trace : règles connues, sorties sans quantificateur, rejeu
    exact de chaque étape, décroissance stricte du nombre de négations à
    chaque substitution de constante

    Returns:
        Liste des anomalies (vide si la trace est valide)
    """
    problems: List[str] = []

    def check(step: TraceStep, path: str) -> None:
        if step.rule not in RULES:
            problems.append(f"{path}: règle inconnue {step.rule}")
        if not is_quantifier_free(step.output):
            problems.append(f"{path}: sortie quantifiée")
        if step.template is not None and replay_step(step) != step.output:
            problems.append(f"{path}: rejeu différent de la sortie")
        if step.rule == "section-(6)":
            for child in step.children:
                if child.negations is None or step.negations is None or child.negations >= step.negations:
                    problems.append(f"{path}: le nombre de négations ne décroît pas")
        for i, child in enumerate(step.children):
            check(child, f"{path}/{i}:{child.rule}")
        for i, inner in enumerate(step.prelude):
            check(inner, f"{path}/prelude{i}:{inner.rule}")

    for i, step in enumerate(trace.steps):
        check(step, f"{i}:{step.rule}")
    if replay_trace(trace) != trace.output:
        problems.append("rejeu global différent de la sortie")
    return problems


# ---------------------------------------------------------------------------
# Inclusion-exclusion
# ---------------------------------------------------------------------------


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def inclusion_exclusion_rewrite(
    d: int,
    var: str,
    common: Sequence[Formula],
    families: Sequence[Sequence[Formula]],
    cap: int = DNF_CAP,
) -> Formula:
    """
    Exactement d valeurs de var dans l'union des ensembles finis
    X_h = {var : common et families[h]}

    Les cardinaux des intersections déterminent celui de l'union ; on
    énumère les répartitions de d éléments entre les régions du diagramme
    de Venn et on impose le cardinal exact de chaque intersection.

    Returns:
        Disjonction de conjonctions d'atomes CountExactly (e <= d)

    Raises:
        DnfExplosionError: plus de cap répartitions
    """
    t = len(families)
    if t == 0:
        return TRUE if d == 0 else FALSE
    subsets = [frozenset(c) for k in range(1, t + 1) for c in combinations(range(t), k)]

    def body(h_set: frozenset) -> Formula:
        parts: List[Formula] = list(common)
        for h in sorted(h_set):
            parts.extend(lit for lit in families[h] if lit not in parts)
        return And(tuple(parts))

    disjuncts: List[Formula] = []
    for regions in _compositions(d, len(subsets)):
        counts = {
            h_set: sum(r for k_set, r in zip(subsets, regions) if h_set <= k_set) for h_set in subsets
        }
        terms: List[Formula] = []
        for h_set in subsets:
            e = counts[h_set]
            # une intersection vide est impliquée par celle d'un sous-ensemble
            if e == 0 and any(counts.get(h_set - {h}) == 0 for h in h_set if len(h_set) > 1):
                continue
            terms.append(CountExactly(e, var, body(h_set)))
        disjuncts.append(And(tuple(terms)))
        if len(disjuncts) > cap:
            raise DnfExplosionError(len(disjuncts), cap)
    return simplify(Or(tuple(disjuncts)))


# ---------------------------------------------------------------------------
# Moteur
# ---------------------------------------------------------------------------


class QEEngine:
    """Élimination des quantificateurs pilotée par un oracle géométrique"""

    def __init__(self, oracle: GeometricOracle, dnf_cap: int = DNF_CAP):
        self.oracle = oracle
        self.dnf_cap = dnf_cap
        self.audited: Dict[Tuple[str, Tuple[Formula, ...]], int] = {}
        self.logger = Logger("QEEngine")
        self._counting_cache: Dict[Tuple[Any, ...], TraceStep] = {}

    # -- pilote ---------------------------------------------------------

    def qe(self, f: Formula) -> Tuple[Formula, EliminationTrace]:
        """
        Formule sans quantificateur équivalente à f

        Raises:
            UnsupportedShapeError: bloc hors du fragment traité (sous-formule fautive citée)
            DnfExplosionError: matrice trop grande
        """
        check_well_formed(f, self.oracle.signature)
        if is_quantifier_free(f):
            return f, EliminationTrace(f, f, f, [])
        started = time.perf_counter()
        steps: List[TraceStep] = []
        template = self._lift(normalize(f), steps)
        output = fill_holes(template, [s.output for s in steps])
        if not is_quantifier_free(output) or not is_cylinder_combination(output, self.oracle.signature):
            raise OracleError(f"Sortie non conforme: {to_text(output)}")
        trace = EliminationTrace(f, output, template, steps)
        self.logger.log_performance(
            "qe", (time.perf_counter() - started) * 1000, steps=sum(s.size() for s in steps)
        )
        return output, trace

    def _lift(self, g: Formula, steps: List[TraceStep]) -> Formula:
        """Remplace chaque quantificateur le plus externe par un trou, étape ajoutée à steps"""
        if isinstance(g, QUANTIFIERS):
            inner: List[TraceStep] = []
            body_template = self._lift(g.body, inner)
            body = fill_holes(body_template, [s.output for s in inner])
            step = self._quantifier_step(rebuild_quantifier(g, body))
            step.prelude = inner
            steps.append(step)
            return hole(len(steps) - 1)
        if isinstance(g, Not):
            return Not(self._lift(g.arg, steps))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(self._lift(a, steps) for a in g.args))
        return g

    def eliminate_block(self, f: Formula) -> Formula:
        """Élimine un quantificateur dont le corps est sans quantificateur"""
        return self.eliminate_block_step(f).output

    def eliminate_block_step(self, f: Formula) -> TraceStep:
        if not isinstance(f, QUANTIFIERS) or not is_quantifier_free(f.body):
            raise UnsupportedShapeError(f"Bloc attendu (quantificateur sur corps sans quantificateur): {to_text(f)}")
        return self._quantifier_step(f)

    def eliminate_counting(self, d: int, var: str, conjuncts: Sequence[Formula]) -> Formula:
        """∃^{>=d} var (conjonction de littéraux positifs), sans quantificateur"""
        if d < 1 or not conjuncts:
            raise UnsupportedShapeError("Comptage positif: d >= 1 et au moins un conjoint requis")
        return self._counting_step(d, var, list(conjuncts)).output

    # -- quantificateur -------------------------------------------------

    def _quantifier_step(self, q: Formula) -> TraceStep:
        if isinstance(q, Exists):
            q = CountAtLeast(1, q.var, q.body)
        var = q.var
        disjuncts = dnf_disjuncts(q.body, self.dnf_cap)
        input_formula = q
        if isinstance(q, CountAtLeast):
            if q.d <= 0:
                return TraceStep("shape-(1)", input_formula, TRUE)
            if q.d >= 2 and len(disjuncts) > 1:
                raise UnsupportedShapeError(f"Seuil >= 2 sur une disjonction: {to_text(q)}")
        elif isinstance(q, CountExactly):
            if len(disjuncts) > 1:
                raise UnsupportedShapeError(f"Comptage exact sur une disjonction: {to_text(q)}")
        if not disjuncts:
            value = TRUE if isinstance(q, CountExactly) and q.d == 0 else FALSE
            return TraceStep("shape-(1)", input_formula, value)

        kids: List[TraceStep] = []
        parts: List[Formula] = []
        for lits in disjuncts:
            hoisted = [lit for lit in lits if var not in free_vars(lit)]
            bound = [lit for lit in lits if var in free_vars(lit)]
            guard = simplify(And(tuple(hoisted)))
            split = self._split_literals(var, bound)
            if isinstance(q, CountInfinite):
                core = self._infinite_count_template(var, split, kids)
                parts.append(And((guard, core)))
                continue
            thresholds = [q.d] if isinstance(q, CountAtLeast) else [k for k in (q.d, q.d + 1) if k >= 1]
            counts: Dict[int, Formula] = {}
            for k in thresholds:
                if split is None:
                    counts[k] = FALSE
                else:
                    kids.append(self._block_step(k, var, split[0], split[1]))
                    counts[k] = hole(len(kids) - 1)
            if isinstance(q, CountAtLeast):
                parts.append(And((guard, counts[q.d])))
                continue
            at_least = counts.get(q.d, TRUE)
            core = And((at_least, Not(counts[q.d + 1])))
            empty_case = TRUE if q.d == 0 else FALSE
            parts.append(Or((And((guard, core)), And((Not(guard), empty_case)))))
        return TraceStep.combine("shape-(1)", input_formula, Or(tuple(parts)), kids)

    def _split_literals(self, var: str, literals: Sequence[Formula]) -> Optional[Tuple[List[Formula], List[Formula]]]:
        """
        Conjoints positifs et négés en var ; les contraintes unaires négées
        deviennent des atomes positifs complémentaires

        Returns:
            (pos, neg), ou None si la conjonction est fausse
        """
        pos: List[Formula] = []
        neg: List[Formula] = []
        for lit in literals:
            lit = simplify(lit)
            if lit == TRUE:
                continue
            if lit == FALSE:
                return None
            if isinstance(lit, Not):
                inner = lit.arg
                if isinstance(inner, Equals) or (
                    isinstance(inner, Atom) and not self.oracle.is_plane_literal(inner, var)
                ):
                    lit = self.oracle.complement_literal(lit, var)
                    if lit == TRUE:
                        continue
                    if lit == FALSE:
                        return None
                elif isinstance(inner, Atom):
                    if inner not in neg:
                        neg.append(inner)
                    continue
                else:
                    raise UnsupportedShapeError(f"Littéral non atomique: {to_text(lit)}")
            if not isinstance(lit, (Atom, Equals)):
                raise UnsupportedShapeError(f"Littéral non atomique: {to_text(lit)}")
            if lit not in pos:
                pos.append(lit)
        return pos, neg

    def _infinite_count_template(self, var: str, split, kids: List[TraceStep]) -> Formula:
        """∃^∞ : fibres positives toutes infinies, fibres négées toutes finies"""
        if split is None:
            return FALSE
        pos, neg = split
        parts = [self.oracle.infinite_condition(lit, var) for lit in pos]
        parts.extend(Not(self.oracle.infinite_condition(lit, var)) for lit in neg)
        body = And(tuple(pos) + tuple(Not(n) for n in neg))
        kids.append(TraceStep("infinite-(5)", CountInfinite(var, body), simplify(And(tuple(parts)))))
        return hole(len(kids) - 1)

    # -- blocs ----------------------------------------------------------

    @staticmethod
    def _block_input(d: int, var: str, pos: Sequence[Formula], neg: Sequence[Formula]) -> Formula:
        return CountAtLeast(d, var, And(tuple(pos) + tuple(Not(n) for n in neg)))

    def _block_step(self, d: int, var: str, pos: List[Formula], neg: List[Formula]) -> TraceStep:
        """∃^{>=d} var (pos et non neg) par récurrence sur le nombre de négations"""
        block = self._block_input(d, var, pos, neg)
        if not pos:
            raise UnsupportedShapeError(f"Aucun conjoint positif ne lie {var}: {to_text(block)}")
        if not neg:
            child = self._counting_step(d, var, pos)
            return TraceStep.combine("shape-(1)", block, hole(0), [child], negations=0)
        finite = self._finite_step(d, var, pos, neg)
        infinite = self._infinite_step(d, var, pos, neg)
        return TraceStep.combine("shape-(1)", block, Or((hole(0), hole(1))), [finite, infinite], negations=len(neg))

    def _finite_step(self, d: int, var: str, pos: List[Formula], neg: List[Formula]) -> TraceStep:
        """Union des conjoints négés finie, de cardinal e <= borne uniforme"""
        bound = sum(self._audited_bound(var, pos + [n]) for n in neg)
        union = Or(tuple(And(tuple(pos) + (n,)) for n in neg))
        input_formula = And((self._block_input(d, var, pos, neg), Not(CountInfinite(var, union))))
        kids: List[TraceStep] = []
        parts: List[Formula] = []
        for e in range(bound + 1):
            kids.append(self._counting_step(d + e, var, pos))
            kids.append(self._inclexcl_step(e, var, pos, [[n] for n in neg]))
            parts.append(And((hole(len(kids) - 2), hole(len(kids) - 1))))
        self.logger.debug("Cas fini", {"d": d, "negations": len(neg), "bound": bound})
        return TraceStep.combine("finite-(4)", input_formula, Or(tuple(parts)), kids)

    def _audited_bound(self, var: str, literals: List[Formula]) -> int:
        """Borne uniforme, confrontée une fois aux fibres échantillonnées"""
        key = (var, tuple(literals))
        if key not in self.audited:
            witness = self.oracle.audit_uniform_bound(var, literals)
            if witness is not None:
                raise OracleError(f"Borne uniforme dépassée: {witness}")
            self.audited[key] = self.oracle.uniform_bound(var, literals)
        return self.audited[key]

    def _infinite_step(self, d: int, var: str, pos: List[Formula], neg: List[Formula]) -> TraceStep:
        """Un conjoint négé a une infinité de solutions : sa variable partenaire est une constante"""
        union = Or(tuple(And(tuple(pos) + (n,)) for n in neg))
        input_formula = And((self._block_input(d, var, pos, neg), CountInfinite(var, union)))
        kids: List[TraceStep] = []
        for j, atom in enumerate(neg):
            for r in self.oracle.infinite_locus(atom, var):
                kids.append(self._section_step(d, var, pos, neg, j, r))
        return TraceStep.combine("infinite-(5)", input_formula, Or(tuple(hole(k) for k in range(len(kids)))), kids)

    def _section_step(self, d: int, var: str, pos: List[Formula], neg: List[Formula], j: int, r: str) -> TraceStep:
        """Substitution x = r dans le bloc ; le conjoint négé j devient une contrainte unaire"""
        atom = neg[j]
        partner = next(a for a in atom.args if a != var)
        sig = self.oracle.signature
        block = self._block_input(d, var, pos, neg)
        input_formula = And((Equals(partner, r), block))
        substituted = [substitute_constant(lit, partner, r, sig) for lit in pos]
        substituted.extend(simplify(Not(substitute_constant(n, partner, r, sig))) for n in neg)
        split = self._split_literals(var, substituted)
        if split is None:
            return TraceStep("section-(6)", input_formula, FALSE, negations=len(neg))
        new_pos, new_neg = split
        child = self._block_step(d, var, new_pos, new_neg)
        return TraceStep.combine(
            "section-(6)", input_formula, And((Equals(partner, r), hole(0))), [child], negations=len(neg)
        )

    def _inclexcl_step(self, e: int, var: str, common: List[Formula], families: List[List[Formula]]) -> TraceStep:
        """∃^{=e} var dans l'union, réécrit puis compté conjonction par conjonction"""
        union = Or(tuple(And(tuple(common) + tuple(fam)) for fam in families))
        input_formula = CountExactly(e, var, union)
        rewritten = inclusion_exclusion_rewrite(e, var, common, families, self.dnf_cap)
        kids: List[TraceStep] = []
        index: Dict[Formula, int] = {}

        def counted(k: int, body: Formula) -> Formula:
            if k <= 0:
                return TRUE
            key = CountAtLeast(k, var, body)
            if key not in index:
                conjuncts = list(body.args) if isinstance(body, And) else [body]
                kids.append(self._counting_step(k, var, conjuncts))
                index[key] = len(kids) - 1
            return hole(index[key])

        def go(g: Formula) -> Formula:
            if isinstance(g, CountExactly):
                return And((counted(g.d, g.body), Not(counted(g.d + 1, g.body))))
            if isinstance(g, CountAtLeast):
                return counted(g.d, g.body)
            if isinstance(g, Not):
                return Not(go(g.arg))
            if isinstance(g, (And, Or)):
                return type(g)(tuple(go(a) for a in g.args))
            return g

        return TraceStep.combine("inclexcl", input_formula, go(rewritten), kids)

    # -- comptage positif -----------------------------------------------

    def _counting_step(self, d: int, var: str, conjuncts: List[Formula]) -> TraceStep:
        """
        ∃^{>=d} var des conjoints positifs : disjonction sur les parties L de
        {q_l} de (∃^{>=d-|L|} var E) et phi_l pour l dans L, non phi_l sinon
        """
        key = (d, var, tuple(sorted(to_text(c) for c in conjuncts)))
        cached = self._counting_cache.get(key)
        if cached is not None:
            return cached
        input_formula = CountAtLeast(d, var, And(tuple(conjuncts)))
        grouping = self.oracle.group(var, conjuncts)
        size = len(grouping.constants)
        if 2 ** size > self.dnf_cap:
            raise DnfExplosionError(2 ** size, self.dnf_cap)

        kids: List[TraceStep] = []
        holes_by_e: Dict[int, int] = {}

        def count_hole(e: int) -> Formula:
            if e <= 0:
                return TRUE
            if e not in holes_by_e:
                output = self.oracle.count_curve(grouping, e)
                kids.append(TraceStep("positive", CountAtLeast(e, var, grouping.curve_formula()), output))
                holes_by_e[e] = len(kids) - 1
            return hole(holes_by_e[e])

        parts: List[Formula] = []
        for mask in range(2 ** size):
            chosen = [idx for idx in range(size) if mask >> idx & 1]
            literals: List[Formula] = [count_hole(d - len(chosen))]
            for idx, phi in enumerate(grouping.phis):
                literals.append(phi if idx in chosen else Not(phi))
            parts.append(And(tuple(literals)))
        step = TraceStep.combine("grouping", input_formula, Or(tuple(parts)), kids)
        self._counting_cache[key] = step
        return step


# ---------------------------------------------------------------------------
# Fonctions de module
# ---------------------------------------------------------------------------


def qe(f: Formula, oracle: GeometricOracle, dnf_cap: int = DNF_CAP) -> Tuple[Formula, EliminationTrace]:
    return QEEngine(oracle, dnf_cap).qe(f)


def eliminate_block(f: Formula, oracle: GeometricOracle) -> Formula:
    return QEEngine(oracle).eliminate_block(f)


def eliminate_counting(d: int, var: str, conjuncts: Sequence[Formula], oracle: GeometricOracle) -> Formula:
    return QEEngine(oracle).eliminate_counting(d, var, conjuncts)


def formula_depth(f: Formula) -> int:
    """Profondeur de l'arbre (statistique des rapports)"""
    kids = children(f)
    return 1 + max((formula_depth(c) for c in kids), default=0)
