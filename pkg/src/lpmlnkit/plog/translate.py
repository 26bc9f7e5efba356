"""P-log to LP^MLN, and the map from possible worlds to the stable models
of the translation.

The translation keeps the logical part as hard rules and adds auxiliary
atoms that record, per world, which values were possible, which had an
assigned probability and how much mass is left over for the rest.  Soft
constraints on those atoms multiply the right factors into each world's
weight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..core import (
    BOT, HARD, Atom, Comparison, CountAgg, Implies, LpmlnProgram, Not, Num, Soft,
    SumAgg, Sym, Var, WeightedFormula, Arith, conj,
)
from ..grounder import ground
from ..lpmln import probability_table
from .semantics import (
    attribute_view, body_formula, eq_atom, intervene_atom, possible_values,
    possible_worlds, random_terms, tau_formulas, applied,
)
from .syntax import TRUE, AttrAtom, PlogProgram, ground_plog

POSS = "poss"
POSS_ASSIGNED_BY = "poss_with_ass_pr_k"
ASSIGNED = "ass_pr"
POSS_ASSIGNED = "poss_with_ass_pr"
POSS_DEFAULT = "poss_with_def_pr"
NUM_DEFAULT = "num_def_pr"
REMAINING = "rem_pr"
TOTAL_DEFAULT = "total_def_pr"
AUX_PREDICATES = frozenset({POSS, POSS_ASSIGNED_BY, ASSIGNED, POSS_ASSIGNED, POSS_DEFAULT,
                            NUM_DEFAULT, REMAINING, TOTAL_DEFAULT})


def _atom(pred: str, *parts) -> Atom:
    args = []
    for p in parts:
        if isinstance(p, tuple):
            args.extend(p)
        elif isinstance(p, str):
            args.append(Sym(p))
        elif isinstance(p, int):
            args.append(Num(p))
        else:
            args.append(p)
    return Atom(pred, tuple(args))


def poss(rid, term, v):
    return _atom(POSS, rid, term[0], term[1], v)


def poss_assigned_by(rid, k, term, v):
    return _atom(POSS_ASSIGNED_BY, rid, k, term[0], term[1], v)


def assigned(rid, k, term, v):
    return _atom(ASSIGNED, rid, k, term[0], term[1], v)


def poss_assigned(term, v):
    return _atom(POSS_ASSIGNED, term[0], term[1], v)


def poss_default(term, v):
    return _atom(POSS_DEFAULT, term[0], term[1], v)


def num_default(term, m):
    return _atom(NUM_DEFAULT, term[0], term[1], m if isinstance(m, (Var, Num)) else Num(m))


def remaining(term, x):
    return _atom(REMAINING, term[0], term[1], x if isinstance(x, (Var, Num, Arith)) else Num(x))


def total_default(term, x):
    return _atom(TOTAL_DEFAULT, term[0], term[1], x if isinstance(x, (Var, Num)) else Num(x))


def ln(p: Fraction) -> float:
    return math.log(p.numerator) - math.log(p.denominator)


def subset_sums(probs) -> list:
    sums = set()
    for mask in range(1 << len(probs)):
        sums.add(sum((p for i, p in enumerate(probs) if mask >> i & 1), Fraction(0)))
    return sorted(sums)


def remaining_values(prog: PlogProgram, term: tuple) -> list:
    """1 minus every subset sum of the probabilities assigned to c(u), largest first."""
    probs = [p.prob for p in prog.pr if (p.atom.attr, p.atom.args) == term]
    return sorted({1 - s for s in subset_sums(probs)}, reverse=True)


def _pr_of(prog: PlogProgram, rr) -> list:
    return [(k, p) for k, p in enumerate(prog.pr, 1)
            if p.rid == rr.rid and (p.atom.attr, p.atom.args) == rr.term]


class _Builder:
    def __init__(self, prog: PlogProgram):
        self.prog = prog
        self.sorts = dict(prog.sorts)
        self.variables: dict = {}
        self.rules: list = []

    def add(self, weight, formula):
        self.rules.append(WeightedFormula(len(self.rules) + 1, weight, formula))

    def sort(self, prefix: str, values) -> str:
        values = tuple(Num(v) if not isinstance(v, (Num, Sym)) else v for v in values)
        for name, vs in self.sorts.items():
            if name.startswith(prefix) and vs == values:
                return name
        k = 1
        while f"{prefix}{k}" in self.sorts:
            k += 1
        name = f"{prefix}{k}"
        self.sorts[name] = values
        return name

    def var(self, letter: str, sort: str) -> Var:
        name = f"{letter}_{sort}"
        self.variables[name] = sort
        return Var(name, sort)

    def program(self) -> LpmlnProgram:
        return LpmlnProgram(self.sorts, self.variables, tuple(self.rules))


def plog2lpmln(prog: PlogProgram) -> LpmlnProgram:
    prog = ground_plog(prog)
    b = _Builder(prog)
    for f in tau_formulas(prog):
        b.add(HARD, f)

    # possible atoms
    for rr in prog.random:
        body = body_formula(rr.body)
        free = Not(intervene_atom(rr.term))
        for v in prog.range_of(rr.attr):
            guard = [eq_atom(AttrAtom(rr.pred, (v,), TRUE))] if rr.pred else []
            b.add(HARD, Implies(conj(body + guard + [free]), poss(rr.rid, rr.term, v)))

    # assigned probabilities
    for k, p in enumerate(prog.pr, 1):
        term, v = (p.atom.attr, p.atom.args), p.atom.value
        by = poss_assigned_by(p.rid, k, term, v)
        got = assigned(p.rid, k, term, v)
        b.add(HARD, Implies(conj([poss(p.rid, term, v)] + body_formula(p.cond)), by))
        b.add(HARD, Implies(conj([eq_atom(p.atom), by]), got))
        if p.prob > 0:
            b.add(Soft(ln(p.prob)), Implies(Not(got), BOT))
        else:
            b.add(HARD, Implies(got, BOT))
        b.add(HARD, Implies(by, poss_assigned(term, v)))

    # denominator of the default probability
    for rr in prog.random:
        for v in prog.range_of(rr.attr):
            b.add(HARD, Implies(conj([poss(rr.rid, rr.term, v), Not(poss_assigned(rr.term, v))]),
                                poss_default(rr.term, v)))
    for term in random_terms(prog):
        c, args = term
        attr = prog.attributes[c]
        size = len(prog.range_of(c))
        rng = attr.range_sort
        v, y = b.var("V", rng), b.var("Y", rng)
        n = b.var("N", b.sort("aux_count_", range(1, size + 1)))
        count = CountAgg(n, ((y, poss_default(term, y)),))
        b.add(HARD, Implies(conj([eq_atom(AttrAtom(c, args, v)), poss_default(term, v), count]),
                            num_default(term, n)))
        for m in range(2, size + 1):
            b.add(Soft(ln(Fraction(1, m))), Implies(Not(num_default(term, m)), BOT))

    # numerator of the default probability
    for term in random_terms(prog):
        c, args = term
        rules_here = [rr for rr in prog.random if rr.term == term and _pr_of(prog, rr)]
        if not rules_here:
            continue
        rng = prog.attributes[c].range_sort
        v = b.var("V", rng)
        for rr in rules_here:
            mine = _pr_of(prog, rr)
            s = b.var("S", b.sort("aux_sum_", subset_sums([p.prob for _, p in mine])))
            total = SumAgg(s, tuple((p.prob, poss_assigned_by(rr.rid, k, term, p.atom.value))
                                    for k, p in mine))
            body = body_formula(rr.body) + [eq_atom(AttrAtom(c, args, v)), poss_default(term, v), total]
            b.add(HARD, Implies(conj(body), remaining(term, Arith("-", Num(1), s))))
        rem = remaining_values(prog, term)
        x = b.var("X", b.sort("aux_rem_", rem))
        b.add(HARD, Implies(conj([remaining(term, x), Comparison(x, ">", Num(0))]),
                            total_default(term, x)))
        for val in rem:
            if val > 0:
                b.add(Soft(ln(val)), Implies(Not(total_default(term, val)), BOT))
        b.add(HARD, Implies(conj([remaining(term, x), Comparison(x, "<=", Num(0))]), BOT))
    return b.program()


def sigma3(prog: PlogProgram) -> set:
    """Auxiliary atoms of the translation's signature."""
    prog = ground_plog(prog)
    out = set()
    for rr in prog.random:
        for v in prog.range_of(rr.attr):
            out.add(poss(rr.rid, rr.term, v))
    for k, p in enumerate(prog.pr, 1):
        term = (p.atom.attr, p.atom.args)
        out.add(poss_assigned_by(p.rid, k, term, p.atom.value))
        out.add(assigned(p.rid, k, term, p.atom.value))
    for term in random_terms(prog):
        values = prog.range_of(term[0])
        for v in values:
            out.add(poss_assigned(term, v))
            out.add(poss_default(term, v))
        for m in range(1, len(values) + 1):
            out.add(num_default(term, m))
        if any(p for p in prog.pr if (p.atom.attr, p.atom.args) == term):
            for x in remaining_values(prog, term):
                out.add(remaining(term, x))
                if x > 0:
                    out.add(total_default(term, x))
    return out


def phi(world: frozenset, prog: PlogProgram) -> frozenset:
    """Extend a possible world with the auxiliary atoms it determines."""
    prog = ground_plog(prog)
    out = set(world)
    for rr in prog.random:
        for v in possible_values(prog, world, rr):
            out.add(poss(rr.rid, rr.term, v))
        for k, p in applied(prog, world, rr):
            term, v = rr.term, p.atom.value
            out.add(poss_assigned_by(rr.rid, k, term, v))
            if eq_atom(p.atom) in world:
                out.add(assigned(rr.rid, k, term, v))
    for term in random_terms(prog):
        view = attribute_view(prog, world, term)
        if view.rule is None:
            continue
        for v in view.assigned:
            out.add(poss_assigned(term, v))
        defaults = view.default_values
        for v in defaults:
            out.add(poss_default(term, v))
        if view.value in defaults:
            out.add(num_default(term, len(defaults)))
            # the remaining-mass atoms exist only for rules with pr-atoms
            if _pr_of(prog, view.rule):
                x = view.remaining
                out.add(remaining(term, x))
                if x > 0:
                    out.add(total_default(term, x))
    return frozenset(out)


def restrict(model: frozenset) -> frozenset:
    return frozenset(a for a in model if a.predicate not in AUX_PREDICATES)


@dataclass(frozen=True)
class Crosscheck:
    worlds_match: bool
    phi_match: bool
    max_deviation: float
    reports: tuple
    table: object

    @property
    def ok(self) -> bool:
        return self.worlds_match and self.phi_match


def crosscheck(prog: PlogProgram, **caps) -> Crosscheck:
    """Compare the direct semantics with the probabilities of the translation."""
    prog = ground_plog(prog)
    reports = [r for r in possible_worlds(prog, **caps) if r.mu > 0]
    table = probability_table(ground(plog2lpmln(prog)), **caps)
    positive = {e.model: e.probability for e in table.entries if e.probability > 0}
    by_world = {r.world: r for r in reports}
    worlds_match = {restrict(m) for m in positive} == set(by_world)
    images = {phi(r.world, prog): r for r in reports}
    phi_match = set(images) == set(positive)
    dev = max((abs(r.mu - positive.get(m, 0.0)) for m, r in images.items()), default=0.0)
    return Crosscheck(worlds_match, phi_match, dev, tuple(reports), table)
