"""Possible worlds of P-log programs and their probabilities.

The logical part is an ASP program (`tau`) whose stable models are the
possible worlds.  Probabilities are then computed directly, in exact
rational arithmetic, from the random selection rules and pr-atoms that
apply in each world.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from ..core import HARD, Atom, atom_key, Formula, Implies, Not, Sym, WeightedFormula, conj, disj
from ..errors import ConditionViolation, InconsistentProgram
from ..grounder import GroundProgram, make_ground
from ..stable import enumerate_stable, sort_models
from .syntax import TRUE, AttrAtom, Lit, PlogProgram, ground_plog


# ---------------------------------------------------------------- atom encoding

def eq_atom(a: AttrAtom) -> Atom:
    return Atom(f"eq_{a.attr}", tuple(a.args) + (a.value,))


def _aux(name: str, *parts) -> Atom:
    args = []
    for p in parts:
        if isinstance(p, tuple):
            args.extend(p)
        elif isinstance(p, str):
            args.append(Sym(p))
        else:
            args.append(p)
    return Atom(name, tuple(args))


def intervene_atom(term: tuple) -> Atom:
    return _aux("intervene", term[0], term[1])


def obs_atom(a: AttrAtom, positive: bool = True) -> Atom:
    return _aux("obs" if positive else "nobs", a.attr, a.args, a.value)


def do_atom(a: AttrAtom) -> Atom:
    return _aux("do", a.attr, a.args, a.value)


def lit_formula(item) -> Formula:
    if isinstance(item, Lit):
        a = eq_atom(item.atom)
        return a if item.positive else Not(a)
    raise TypeError(f"unexpected body item {item!r}")


def body_formula(body) -> list:
    return [lit_formula(b) for b in body]


def holds(world: frozenset, body) -> bool:
    return all((eq_atom(b.atom) in world) == b.positive for b in body)


# ---------------------------------------------------------------- tau

def tau_formulas(prog: PlogProgram) -> list:
    prog = ground_plog(prog)
    out: list = []
    for r in prog.rules:
        head = eq_atom(r.head) if r.head is not None else None
        body = body_formula(r.body)
        out.append(Implies(conj(body), head) if head is not None and body
                   else head if head is not None else Implies(conj(body), disj([])))
    for c, args in prog.attribute_terms():
        values = prog.range_of(c)
        for v1, v2 in itertools.combinations(values, 2):
            out.append(Not(conj([eq_atom(AttrAtom(c, args, v1)), eq_atom(AttrAtom(c, args, v2))])))
    for rr in prog.random:
        values = prog.range_of(rr.attr)
        body = body_formula(rr.body)
        free = Not(intervene_atom(rr.term))
        heads = [eq_atom(AttrAtom(rr.attr, rr.args, v)) for v in values]
        out.append(Implies(conj(body + [free]), disj(heads)))
        if rr.pred is not None:
            for v, h in zip(values, heads):
                allowed = eq_atom(AttrAtom(rr.pred, (v,), TRUE))
                out.append(Not(conj([h, Not(allowed)] + body + [free])))
    for o in prog.obs:
        fact = obs_atom(o.atom, o.positive)
        out.append(fact)
        target = eq_atom(o.atom)
        out.append(Not(conj([fact, Not(target)] if o.positive else [fact, target])))
    for a in prog.do:
        fact = do_atom(a)
        out.extend([fact, Implies(fact, eq_atom(a)),
                    Implies(fact, intervene_atom((a.attr, a.args)))])
    return out


def tau_signature(prog: PlogProgram) -> set:
    prog = ground_plog(prog)
    sig = {eq_atom(AttrAtom(c, args, v))
           for c, args in prog.attribute_terms() for v in prog.range_of(c)}
    sig |= {intervene_atom(rr.term) for rr in prog.random}
    sig |= {obs_atom(o.atom, o.positive) for o in prog.obs}
    sig |= {do_atom(a) for a in prog.do}
    return sig


def tau(prog: PlogProgram) -> GroundProgram:
    """The logical part as a ground program of hard rules."""
    rules = [WeightedFormula(k, HARD, f) for k, f in enumerate(tau_formulas(prog), 1)]
    return make_ground(rules, tau_signature(prog))


def worlds(prog: PlogProgram, **caps) -> list:
    """Stable models of tau, in canonical order."""
    gp = tau(prog)
    return sort_models(enumerate_stable([r.formula for r in gp.rules], gp.signature, **caps))


# ---------------------------------------------------------------- possibility and probability

def fires(world: frozenset, rr) -> bool:
    return holds(world, rr.body) and intervene_atom(rr.term) not in world


def possible_values(prog: PlogProgram, world: frozenset, rr) -> list:
    """Values c(u)=v possible in the world due to rule rr."""
    if not fires(world, rr):
        return []
    values = prog.range_of(rr.attr)
    if rr.pred is None:
        return list(values)
    return [v for v in values if eq_atom(AttrAtom(rr.pred, (v,), TRUE)) in world]


def applied(prog: PlogProgram, world: frozenset, rr) -> list:
    """(index, pr-atom) pairs of rr applied in the world; index is 1-based over all pr-atoms."""
    poss = set(possible_values(prog, world, rr))
    return [(k, p) for k, p in enumerate(prog.pr, 1)
            if p.rid == rr.rid and (p.atom.attr, p.atom.args) == rr.term
            and p.atom.value in poss and holds(world, p.cond)]


@dataclass(frozen=True)
class AttributeView:
    """What one random attribute looks like in one world."""
    rule: object                 # the random rule whose body holds (or None)
    possible: tuple              # possible values
    assigned: dict               # value -> probability, for applied pr-atoms
    applied: tuple               # (index, pr-atom) pairs
    value: object                # value of c(u) in the world, or None

    @property
    def default_values(self) -> list:
        return [v for v in self.possible if v not in self.assigned]

    @property
    def remaining(self) -> Fraction:
        return 1 - sum(self.assigned.values(), Fraction(0))

    def default_probability(self) -> Fraction:
        n = len(self.default_values)
        if n == 0:
            return Fraction(0)
        return max(self.remaining / n, Fraction(0))

    def probability(self, v) -> Fraction:
        if v in self.assigned:
            return self.assigned[v]
        return self.default_probability()


def attribute_view(prog: PlogProgram, world: frozenset, term: tuple) -> AttributeView:
    c, args = term
    value = next((v for v in prog.range_of(c) if eq_atom(AttrAtom(c, args, v)) in world), None)
    for rr in prog.random:
        if rr.term == term and fires(world, rr):
            apps = applied(prog, world, rr)
            assigned: dict = {}
            for _, p in apps:
                assigned.setdefault(p.atom.value, p.prob)
            return AttributeView(rr, tuple(possible_values(prog, world, rr)), assigned,
                                 tuple(apps), value)
    return AttributeView(None, (), {}, (), value)


@dataclass(frozen=True)
class WorldReport:
    world: frozenset
    happen: dict          # AttrAtom -> Fraction
    mu_hat: Fraction
    mu: float

    def assignment(self) -> dict:
        return {str(a): a.value for a in self.happen}


def random_terms(prog: PlogProgram) -> list:
    seen = []
    for rr in prog.random:
        if rr.term not in seen:
            seen.append(rr.term)
    return seen


def world_weight(prog: PlogProgram, world: frozenset) -> tuple:
    happen = {}
    mu_hat = Fraction(1)
    for term in random_terms(prog):
        view = attribute_view(prog, world, term)
        if view.value is not None and view.value in view.possible:
            p = view.probability(view.value)
            happen[AttrAtom(term[0], term[1], view.value)] = p
            mu_hat *= p
    return happen, mu_hat


def possible_worlds(prog: PlogProgram, **caps) -> list:
    prog = ground_plog(prog)
    reports = []
    for w in worlds(prog, **caps):
        happen, mu_hat = world_weight(prog, w)
        reports.append((w, happen, mu_hat))
    total = sum((m for _, _, m in reports), Fraction(0))
    if total == 0:
        raise InconsistentProgram("inconsistent P-log program: no possible world has positive probability")
    return [WorldReport(w, h, m, float(m / total)) for w, h, m in reports]


# ---------------------------------------------------------------- validity conditions

def check_conditions(prog: PlogProgram, **caps) -> list:
    """Violations of the unique-selection-rule and unique-assignment conditions."""
    prog = ground_plog(prog)
    found = []
    for w in worlds(prog, **caps):
        for rr1, rr2 in itertools.combinations(prog.random, 2):
            if rr1.term == rr2.term and holds(w, rr1.body) and holds(w, rr2.body):
                found.append(ConditionViolation(
                    1, f"rules {rr1.rid} and {rr2.rid} both select {_term_str(rr1.term)} "
                       f"in world {{{_world_str(w)}}}"))
        for rr in prog.random:
            if not holds(w, rr.body):
                continue
            mine = [p for p in prog.pr if p.rid == rr.rid and (p.atom.attr, p.atom.args) == rr.term]
            for p1, p2 in itertools.combinations(mine, 2):
                if p1.atom == p2.atom and holds(w, p1.cond) and holds(w, p2.cond):
                    found.append(ConditionViolation(
                        2, f"two pr-atoms of rule {rr.rid} assign {p1.atom} "
                           f"in world {{{_world_str(w)}}}"))
    unique, seen = [], set()
    for v in found:
        if str(v) not in seen:
            seen.add(str(v))
            unique.append(v)
    return unique


def validate_conditions(prog: PlogProgram, **caps) -> list:
    return check_conditions(prog, **caps)


def require_conditions(prog: PlogProgram, **caps) -> None:
    found = check_conditions(prog, **caps)
    if found:
        raise found[0]


def _term_str(term: tuple) -> str:
    c, args = term
    return f"{c}({','.join(map(str, args))})" if args else c


def _world_str(w: frozenset) -> str:
    return ", ".join(str(a) for a in sorted(w, key=atom_key) if a.predicate.startswith("eq_"))
