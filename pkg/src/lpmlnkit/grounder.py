"""Instantiate variables over their sorts and expand aggregates.

Each rule with free variables X1..Xn becomes one ground rule per assignment
in the product of the sorts.  Comparisons become Top/Bot and aggregates
become propositional formulas; nothing else is simplified.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    BOT, TOP, And, Arith, Atom, Bot, Comparison, CountAgg, Formula, Implies,
    LpmlnProgram, Not, Num, Or, SumAgg, Sym, Top, Var, WeightedFormula,
    atom_key, conj, disj, free_vars, is_hard, iter_atoms,
)
from .errors import CapExceeded, GroundingError

AGGREGATE_CAP = 12


@dataclass(frozen=True)
class GroundProgram:
    rules: tuple                      # of WeightedFormula, indices 1..N
    signature: frozenset              # of Atom
    provenance: dict = field(default_factory=dict)   # ground index -> source index

    @property
    def hard(self) -> list:
        return [r for r in self.rules if is_hard(r.weight)]

    def sorted_signature(self) -> list:
        return sorted(self.signature, key=atom_key)


def make_ground(rules, extra_atoms=()) -> GroundProgram:
    """Wrap already-ground weighted formulas, renumbering from 1."""
    out, prov, sig = [], {}, set(extra_atoms)
    for r in rules:
        wf = WeightedFormula(len(out) + 1, r.weight, r.formula)
        prov[wf.index] = r.index
        sig.update(iter_atoms(r.formula))
        out.append(wf)
    return GroundProgram(tuple(out), frozenset(sig), prov)


# ---------------------------------------------------------------- aggregates

def expand_count(atoms, m, cap: int = AGGREGATE_CAP) -> Formula:
    """`m = #count{atoms}` as a disjunction over m-subsets.

    Each disjunct asserts the subset true and the rest false, so exactly m
    atoms hold.
    """
    atoms = _dedupe(atoms)
    if len(atoms) > cap:
        raise CapExceeded(f"aggregate over {len(atoms)} atoms exceeds cap {cap}")
    if isinstance(m, Num):
        m = m.value
    if Fraction(m).denominator != 1 or not 0 <= m <= len(atoms):
        return BOT
    m = int(m)
    out = []
    for chosen in itertools.combinations(range(len(atoms)), m):
        lits = [a if i in chosen else Not(a) for i, a in enumerate(atoms)]
        out.append(conj(lits))
    return disj(out)


def expand_sum(pairs, target, cap: int = AGGREGATE_CAP) -> Formula:
    """`target = #sum{p : a}` as a disjunction over exact subsets.

    A subset S qualifies when its weights add to `target`; its disjunct makes
    S true and every other atom false.  Repeated (weight, atom) pairs count
    once; one atom with several weights counts the sum.
    """
    weights: dict = {}
    seen = set()
    for w, a in pairs:
        if (w, a) in seen:
            continue
        seen.add((w, a))
        weights[a] = weights.get(a, Fraction(0)) + Fraction(w)
    atoms = list(weights)
    if len(atoms) > cap:
        raise CapExceeded(f"aggregate over {len(atoms)} atoms exceeds cap {cap}")
    if isinstance(target, Num):
        target = target.value
    out = []
    for mask in range(1 << len(atoms)):
        total = sum((weights[a] for i, a in enumerate(atoms) if mask >> i & 1), Fraction(0))
        if total == target:
            out.append(conj(a if mask >> i & 1 else Not(a) for i, a in enumerate(atoms)))
    return disj(out)


def _dedupe(atoms) -> list:
    seen, out = set(), []
    for a in atoms:
        if a not in seen:
            seen.add(a)
            out.append(a)
    return out


# ---------------------------------------------------------------- substitution

def eval_term(t, env: dict):
    if isinstance(t, Var):
        if t not in env:
            raise GroundingError(f"unbound variable {t.name}")
        return env[t]
    if isinstance(t, Arith):
        a, b = eval_term(t.left, env), eval_term(t.right, env)
        if not (isinstance(a, Num) and isinstance(b, Num)):
            raise GroundingError(f"arithmetic on non-numbers: {t}")
        return Num(a.value + b.value if t.op == "+" else a.value - b.value)
    return t


def compare(lhs, op: str, rhs) -> bool:
    if isinstance(lhs, Num) and isinstance(rhs, Num):
        a, b = lhs.value, rhs.value
    elif isinstance(lhs, Sym) and isinstance(rhs, Sym):
        if op not in ("=", "!="):
            raise GroundingError(f"cannot order symbols: {lhs} {op} {rhs}")
        return (lhs == rhs) == (op == "=")
    else:
        raise GroundingError(f"incomparable terms: {lhs} {op} {rhs}")
    return {"=": a == b, "!=": a != b, "<": a < b, "<=": a <= b,
            ">": a > b, ">=": a >= b}[op]


def substitute(f: Formula, env: dict, sorts: dict, cap: int = AGGREGATE_CAP) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.predicate, tuple(eval_term(t, env) for t in f.args)) if f.args else f
    if isinstance(f, (Bot, Top)):
        return f
    if isinstance(f, Not):
        return Not(substitute(f.arg, env, sorts, cap))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(substitute(f.left, env, sorts, cap), substitute(f.right, env, sorts, cap))
    if isinstance(f, Comparison):
        return TOP if compare(eval_term(f.lhs, env), f.op, eval_term(f.rhs, env)) else BOT
    if isinstance(f, CountAgg):
        atoms = []
        for binder, pattern in f.elements:
            for v in _sort_values(sorts, binder.sort):
                atoms.append(substitute(pattern, {**env, binder: v}, sorts, cap))
        return expand_count(atoms, eval_term(f.target, env), cap)
    if isinstance(f, SumAgg):
        pairs = [(w, substitute(a, env, sorts, cap)) for w, a in f.elements]
        return expand_sum(pairs, eval_term(f.target, env), cap)
    raise TypeError(f"not a formula: {f!r}")


def _sort_values(sorts: dict, name: str) -> tuple:
    if name not in sorts:
        raise GroundingError(f"unknown sort {name}")
    return sorts[name]


def ground(program: LpmlnProgram, cap: int = AGGREGATE_CAP) -> GroundProgram:
    rules, prov, sig = [], {}, set()
    for r in program.rules:
        variables = free_vars(r.formula)
        domains = [_sort_values(program.sorts, v.sort) for v in variables]
        for values in itertools.product(*domains):
            g = substitute(r.formula, dict(zip(variables, values)), program.sorts, cap)
            wf = WeightedFormula(len(rules) + 1, r.weight, g)
            rules.append(wf)
            prov[wf.index] = r.index
            sig.update(iter_atoms(g))
    return GroundProgram(tuple(rules), frozenset(sig), prov)
