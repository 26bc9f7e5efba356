"""Translations from ground LP^MLN programs into programs with weak constraints.

Every translation keeps the optimal stable models in step with the most
probable stable models of the source (after dropping the auxiliary
`unsat` atoms, where used).  Weak-constraint weights here are penalties:
the optimizer minimizes their sum, highest level first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import (
    Atom, Implies, Not, Num, atom_key, choice, conj, disj, is_hard, is_vacuous,
    rule_parts,
)
from .errors import RuleFormError, TranslationError
from .grounder import GroundProgram
from .stable import WcProgram, WeakConstraint, satisfies, to_rules
from .syntax import format_formula, format_statement

HARD_LEVEL, SOFT_LEVEL = 1, 0
UNSAT = "unsat"


@dataclass(frozen=True)
class TranslationOutput:
    wc: WcProgram
    mode: str
    source: GroundProgram
    unsat: dict = field(default_factory=dict)        # rule index -> unsat atom
    unsat_test: dict = field(default_factory=dict)   # rule index -> formula that makes unsat true

    def phi(self, model: frozenset) -> frozenset:
        """Extend a source model with the unsat atoms it forces."""
        extra = {self.unsat[k] for k, test in self.unsat_test.items() if satisfies(model, test)}
        return frozenset(model) | extra

    def restrict(self, model: frozenset) -> frozenset:
        """Drop auxiliary atoms."""
        aux = set(self.unsat.values())
        return frozenset(a for a in model if a not in aux)


def unsat_atom(index: int) -> Atom:
    return Atom(UNSAT, (Num(index),))


def _check_reserved(gp: GroundProgram) -> None:
    if any(a.predicate == UNSAT for a in gp.signature):
        raise TranslationError(f"predicate {UNSAT!r} is reserved for translations")


def _level_weight(r, sign: float = 1.0):
    if is_hard(r.weight):
        return sign * 1.0, HARD_LEVEL
    return sign * r.weight.value, SOFT_LEVEL


def lpmln2wc(gp: GroundProgram, strict_hard: bool = False) -> TranslationOutput:
    """Choice over every rule; a satisfied rule earns its weight as a reward."""
    base, weak = [], []
    for r in gp.rules:
        if strict_hard and is_hard(r.weight):
            base.append(r.formula)
            continue
        base.append(choice(r.formula))
        w, level = _level_weight(r, -1.0)
        weak.append(WeakConstraint(r.formula, w, level))
    return TranslationOutput(WcProgram(tuple(base), tuple(weak)), "wc", gp)


def lpmln2wc_pnt(gp: GroundProgram) -> TranslationOutput:
    """Choice over every rule; a violated rule pays its weight."""
    base, weak = [], []
    for r in gp.rules:
        base.append(choice(r.formula))
        w, level = _level_weight(r)
        weak.append(WeakConstraint(Not(r.formula), w, level))
    return TranslationOutput(WcProgram(tuple(base), tuple(weak)), "pnt", gp)


def lpmln2wc_pnt_rule(gp: GroundProgram) -> TranslationOutput:
    """`unsat(i)` marks a violated rule; the rule holds unless it is marked."""
    _check_reserved(gp)
    base, weak, unsat, tests = [], [], {}, {}
    for r in gp.rules:
        u = unsat_atom(r.index)
        base.append(Implies(Not(r.formula), u))
        base.append(Implies(Not(u), r.formula))
        w, level = _level_weight(r)
        weak.append(WeakConstraint(u, w, level))
        unsat[r.index] = u
        tests[r.index] = Not(r.formula)
    return TranslationOutput(WcProgram(tuple(base), tuple(weak)), "pnt-rule", gp, unsat, tests)


def _rule_of(r) -> object:
    parts = rule_parts(r.formula)
    if parts is None:
        raise RuleFormError(f"rule {r.index} is not in rule form: {format_statement(r.formula)}")
    return parts


def _strict_rules(r) -> list:
    rules = to_rules([r.formula])
    if rules is None or any(not isinstance(g, Atom) for x in rules for g in x.neg):
        raise RuleFormError(f"rule {r.index} cannot be written as plain rules: "
                            f"{format_statement(r.formula)}")
    return [Implies(conj(list(x.pos) + [Not(g) for g in x.neg]), disj(x.head)) for x in rules]


def lpmln2wc_rule_clingo(gp: GroundProgram, simplify_constraints: bool = False,
                         strict_hard: bool = False) -> TranslationOutput:
    """Solver-ready variant for rule-form programs.

    Rule i, `Head :- Body`, becomes `unsat(i) :- Body, not Head` and
    `Head :- Body, not unsat(i)` with a weak constraint on `unsat(i)`.
    With `simplify_constraints`, a rule with an empty head goes straight to
    `:~ Body` instead.  With `strict_hard`, hard rules are kept as plain
    rules (after rewriting into rule form), which preserves the optimal
    models whenever the hard rules can all hold.
    """
    _check_reserved(gp)
    base, weak, unsat, tests = [], [], {}, {}
    for r in gp.rules:
        if strict_hard and is_hard(r.weight):
            base.extend(_strict_rules(r))
            continue
        parts = _rule_of(r)
        if is_vacuous(parts):
            continue
        body = list(parts.pos) + [Not(a) for a in parts.neg]
        w, level = _level_weight(r)
        if simplify_constraints and not parts.head:
            weak.append(WeakConstraint(conj(body), w, level))
            continue
        u = unsat_atom(r.index)
        violated = conj(body + [Not(h) for h in parts.head])
        base.append(Implies(violated, u))
        base.append(Implies(conj(body + [Not(u)]), disj(parts.head)))
        weak.append(WeakConstraint(u, w, level))
        unsat[r.index] = u
        tests[r.index] = violated
    return TranslationOutput(WcProgram(tuple(base), tuple(weak)), "clingo", gp, unsat, tests)


def mln2wc(gp: GroundProgram) -> TranslationOutput:
    """Markov logic reading: every atom is free, so stable models are all interpretations."""
    t = lpmln2wc(gp)
    frees = tuple(choice(a) for a in sorted(gp.signature, key=atom_key))
    return TranslationOutput(WcProgram(t.wc.base + frees, t.wc.weak), "mln", gp)


# ---------------------------------------------------------------- textual output

def format_wc(t: TranslationOutput) -> str:
    lines = [f"{format_statement(f)}." for f in t.wc.base]
    for w in t.wc.weak:
        lines.append(f":~ {format_formula(w.formula)}. [{_num(w.weight)}@{w.level}]")
    return "\n".join(lines) + "\n"


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def _asp_term(t) -> str:
    if isinstance(t, Num) and t.value.denominator != 1:
        return f'"{t}"'
    return str(t)


def _asp_atom(a: Atom) -> str:
    if not a.args:
        return a.predicate
    return f"{a.predicate}({','.join(_asp_term(t) for t in a.args)})"


def _asp_body(pos, neg) -> str:
    lits = [_asp_atom(a) for a in pos] + [f"not {_asp_atom(a)}" for a in neg]
    return ", ".join(lits)


def emit_aspcore2(t: TranslationOutput, scale: int = 1000) -> str:
    """ASP-Core-2 text with integer weights.

    Each weak constraint carries its position as a term, so constraints
    with equal weight and level are not merged by the solver.
    """
    limit = 2 ** 31
    lines = [f"% weights scaled by {scale}, rounded half away from zero"]
    for f in t.wc.base:
        parts = rule_parts(f)
        if parts is None:
            raise RuleFormError(f"not an ASP rule: {format_statement(f)}")
        if is_vacuous(parts):
            continue
        head = " ; ".join(_asp_atom(a) for a in parts.head)
        body = _asp_body(parts.pos, parts.neg)
        if body:
            lines.append(f"{head} :- {body}." if head else f":- {body}.")
        else:
            lines.append(f"{head}." if head else ":- #true.")
    for k, w in enumerate(t.wc.weak, 1):
        parts = rule_parts(Not(w.formula))
        if parts is None:
            raise RuleFormError(f"weak constraint is not a conjunction of literals: "
                                f"{format_formula(w.formula)}")
        if is_vacuous(parts):
            continue
        scaled = round_half_away(w.weight * scale)
        if abs(scaled) > limit:
            raise TranslationError(f"scaled weight {scaled} does not fit in 32 bits")
        body = _asp_body(parts.pos, parts.neg) or "#true"
        lines.append(f":~ {body}. [{scaled}@{w.level}, {k}]")
    return "\n".join(lines) + "\n"
