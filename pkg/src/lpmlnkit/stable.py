"""Stable models of ground propositional formulas and weak-constraint optimality.

Interpretations are frozensets of the atoms they make true.  Stability is
the reduct-based definition: I is stable for F relative to sigma when I
satisfies F and no J that agrees with I outside sigma and is strictly
smaller inside it satisfies the reduct F^I.

Enumeration has two paths.  The component path rewrites the formulas into
rules (strongly equivalent rewriting, see `to_rules`), splits the atoms
into strongly connected components of the dependency graph and solves the
components bottom-up.  The fallback path scans every interpretation of the
signature.  Both produce the same set; tests hold them to that.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import networkx as nx

from .core import (
    BOT, And, Atom, Bot, Formula, Implies, Not, Or, Top, atom_key,
    iter_atoms,
)
from .errors import CapExceeded

MAX_COMPONENT = 16
MAX_ATOMS = 24
EPS = 1e-9


# ---------------------------------------------------------------- satisfaction and reduct

def satisfies(i: frozenset, f: Formula) -> bool:
    if isinstance(f, Atom):
        return f in i
    if isinstance(f, And):
        return satisfies(i, f.left) and satisfies(i, f.right)
    if isinstance(f, Or):
        return satisfies(i, f.left) or satisfies(i, f.right)
    if isinstance(f, Not):
        return not satisfies(i, f.arg)
    if isinstance(f, Implies):
        return not satisfies(i, f.left) or satisfies(i, f.right)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    raise TypeError(f"cannot evaluate non-ground formula {f!r}")


def reduct(f: Formula, i: frozenset) -> Formula:
    """F^I: subformulas false in I become Bot; Not(G) is read as G -> Bot."""
    if isinstance(f, (Bot, Top)):
        return f
    if not satisfies(i, f):
        return BOT
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Implies(reduct(f.arg, i), BOT)
    return type(f)(reduct(f.left, i), reduct(f.right, i))


def is_stable_relative(formulas, i: frozenset, sigma) -> bool:
    if not all(satisfies(i, f) for f in formulas):
        return False
    sigma = frozenset(sigma)
    reducts = [reduct(f, i) for f in formulas]
    inside = sorted(i & sigma, key=atom_key)
    outside = i - sigma
    for size in range(len(inside)):
        for ys in itertools.combinations(inside, size):
            j = outside | frozenset(ys)
            if all(satisfies(j, r) for r in reducts):
                return False
    return True


def is_stable(formulas, i: frozenset) -> bool:
    return is_stable_relative(formulas, i, i)


# ---------------------------------------------------------------- rewriting into rules

@dataclass(frozen=True, slots=True)
class Rule:
    """head atoms <- pos atoms, not neg_1, ..., not neg_k (neg entries are formulas)."""
    head: tuple
    pos: tuple
    neg: tuple

    def atoms(self) -> set:
        out = set(self.head) | set(self.pos)
        for g in self.neg:
            out.update(iter_atoms(g))
        return out


class NotRuleShaped(Exception):
    pass


def to_rules(formulas) -> list | None:
    """Rewrite formulas into rules, or None if some formula resists.

    Only rewrites valid in the logic of here-and-there are used, so the
    result has the same stable models as the input in every context:
    splitting conjunctions, currying nested implications, distributing
    disjunctive bodies, distributing heads over conjunction and moving
    negated head disjuncts into the body under double negation.  The last
    one turns the choice formula F | not F into F <- not not F.
    """
    out: list = []
    try:
        for f in formulas:
            _head(f, [], out)
    except NotRuleShaped:
        return None
    return out


def _head(h: Formula, body: list, out: list) -> None:
    if isinstance(h, Top):
        return
    if isinstance(h, Bot):
        _emit((), body, out)
    elif isinstance(h, Atom):
        _emit((h,), body, out)
    elif isinstance(h, Not):
        _head(BOT, body + [h.arg], out)
    elif isinstance(h, And):
        _head(h.left, body, out)
        _head(h.right, body, out)
    elif isinstance(h, Implies):
        _head(h.right, body + [h.left], out)
    elif isinstance(h, Or):
        parts = _flatten_or(h)
        negs = [p for p in parts if isinstance(p, Not)]
        rest = [p for p in parts if not isinstance(p, (Not, Bot))]
        if any(isinstance(p, Top) for p in rest):
            return
        extra = [Not(n) for n in negs]  # not not G, kept as a negated body element
        if len(rest) == 0:
            _emit((), body + extra, out)
        elif len(rest) == 1:
            _head(rest[0], body + extra, out)
        else:
            conj_at = next((k for k, p in enumerate(rest) if isinstance(p, And)), None)
            if conj_at is not None:
                a = rest[conj_at]
                others = rest[:conj_at] + rest[conj_at + 1:]
                for side in (a.left, a.right):
                    _head(_or_all(others + [side] + negs), body, out)
            elif all(isinstance(p, Atom) for p in rest):
                _emit(tuple(rest), body + extra, out)
            else:
                raise NotRuleShaped
    else:
        raise NotRuleShaped


def _flatten_or(f: Formula) -> list:
    if isinstance(f, Or):
        return _flatten_or(f.left) + _flatten_or(f.right)
    return [f]


def _or_all(items: list) -> Formula:
    out = items[0]
    for f in items[1:]:
        out = Or(out, f)
    return out


def _emit(head: tuple, body: list, out: list) -> None:
    for pos, neg in _body_alternatives(body):
        out.append(Rule(tuple(dict.fromkeys(head)), tuple(dict.fromkeys(pos)),
                        tuple(dict.fromkeys(neg))))


def _body_alternatives(body: list):
    """Disjunctive normal form of the body as (positive atoms, negated formulas) pairs."""
    alts = [([], [])]
    for b in body:
        alts = [(p + p2, n + n2) for p, n in alts for p2, n2 in _element(b)]
        if not alts:
            break
    return alts


def _element(b: Formula) -> list:
    if isinstance(b, Atom):
        return [([b], [])]
    if isinstance(b, Top):
        return [([], [])]
    if isinstance(b, Bot):
        return []
    if isinstance(b, Not):
        if isinstance(b.arg, Bot):
            return [([], [])]
        if isinstance(b.arg, Top):
            return []
        return [([], [b.arg])]
    if isinstance(b, And):
        return [(p1 + p2, n1 + n2) for p1, n1 in _element(b.left) for p2, n2 in _element(b.right)]
    if isinstance(b, Or):
        return _element(b.left) + _element(b.right)
    raise NotRuleShaped


# ---------------------------------------------------------------- enumeration

def enumerate_stable(formulas, signature=None, *, strategy: str = "auto",
                     max_component: int = MAX_COMPONENT, max_atoms: int = MAX_ATOMS) -> list:
    """All stable models, in canonical order (size, then atoms).

    `strategy` is "auto" (components when rule-shaped, else fallback),
    "split" (components or error) or "fallback".
    """
    formulas = list(formulas)
    sig = set(signature or ())
    for f in formulas:
        sig.update(iter_atoms(f))
    sig = sorted(sig, key=atom_key)
    rules = None if strategy == "fallback" else to_rules(formulas)
    if rules is None:
        if strategy == "split":
            raise ValueError("formulas are not rule-shaped")
        models = _enumerate_fallback(formulas, sig, max_atoms)
    else:
        models = _enumerate_components(rules, sig, max_component)
    return sort_models(models)


def model_key(m) -> tuple:
    return (len(m), sorted(atom_key(a) for a in m))


def sort_models(models) -> list:
    return sorted(set(models), key=model_key)


def _enumerate_fallback(formulas, sig: list, max_atoms: int) -> list:
    if len(sig) > max_atoms:
        raise CapExceeded(f"{len(sig)} atoms exceed the enumeration cap of {max_atoms}")
    out = []
    sig_set = frozenset(sig)
    for size in range(len(sig) + 1):
        for combo in itertools.combinations(sig, size):
            i = frozenset(combo)
            if is_stable_relative(formulas, i, sig_set):
                out.append(i)
    return out


def _holds(i: frozenset, rule: Rule) -> bool:
    """Body of the rule is true in i."""
    return all(a in i for a in rule.pos) and not any(satisfies(i, g) for g in rule.neg)


def _enumerate_components(rules: list, sig: list, max_component: int) -> list:
    graph = nx.DiGraph()
    graph.add_nodes_from(sig)
    constraints = []
    for r in rules:
        if not r.head:
            constraints.append(r)
            continue
        body_atoms = set(r.pos)
        for g in r.neg:
            body_atoms.update(iter_atoms(g))
        for h in r.head:
            for b in body_atoms:
                graph.add_edge(b, h)
            for h2 in r.head:
                if h2 != h:
                    graph.add_edge(h2, h)
    cond = nx.condensation(graph)
    members = cond.graph["mapping"]
    order_key = {c: min(atom_key(a) for a in cond.nodes[c]["members"]) for c in cond.nodes}
    layers = list(nx.lexicographical_topological_sort(cond, key=lambda c: order_key[c]))
    position = {c: k for k, c in enumerate(layers)}

    rules_at = {c: [] for c in layers}
    for r in rules:
        if r.head:
            rules_at[members[r.head[0]]].append(r)
    checks_at: dict = {k: [] for k in range(-1, len(layers))}
    for r in constraints:
        atoms = r.atoms()
        at = max((position[members[a]] for a in atoms), default=-1)
        checks_at[at].append(r)

    partial = [frozenset()]
    if any(_holds(frozenset(), r) for r in checks_at[-1]):
        return []
    for k, c in enumerate(layers):
        comp = sorted(cond.nodes[c]["members"], key=atom_key)
        if len(comp) > max_component:
            raise CapExceeded(f"component of {len(comp)} atoms exceeds cap {max_component}")
        local = rules_at[c]
        heads = [a for a in comp if any(a in r.head for r in local)]
        nxt = []
        for p in partial:
            for size in range(len(heads) + 1):
                for combo in itertools.combinations(heads, size):
                    i = p | frozenset(combo)
                    if _layer_stable(local, i, frozenset(combo)) and \
                            not any(_holds(i, r) for r in checks_at[k]):
                        nxt.append(i)
        partial = nxt
        if not partial:
            return []
    return partial


def _layer_stable(local: list, i: frozenset, x: frozenset) -> bool:
    """Stability of i relative to the current component, whose true part is x."""
    active = []
    for r in local:
        if _holds(i, r):
            if not any(h in i for h in r.head):
                return False
            active.append(r)
    if not x:
        return True
    # reduct of an active rule: pos -> (head atoms true in i); only x may shrink
    reduced = [(tuple(a for a in r.pos if a in x), tuple(h for h in r.head if h in x))
               for r in active]
    if all(len(h) <= 1 for _, h in reduced):
        derived: set = set()
        changed = True
        while changed:
            changed = False
            for pos, head in reduced:
                if head and head[0] not in derived and all(a in derived for a in pos):
                    derived.add(head[0])
                    changed = True
        return derived == x
    xs = sorted(x, key=atom_key)
    for size in range(len(xs)):
        for ys in itertools.combinations(xs, size):
            y = set(ys)
            if all(not all(a in y for a in pos) or any(h in y for h in head)
                   for pos, head in reduced):
                return False
    return True


# ---------------------------------------------------------------- weak constraints

@dataclass(frozen=True)
class WeakConstraint:
    formula: Formula
    weight: float
    level: int


@dataclass(frozen=True)
class WcProgram:
    base: tuple        # of Formula
    weak: tuple = ()   # of WeakConstraint

    def signature(self) -> frozenset:
        sig = set()
        for f in self.base:
            sig.update(iter_atoms(f))
        for w in self.weak:
            sig.update(iter_atoms(w.formula))
        return frozenset(sig)

    def levels(self) -> list:
        return sorted({w.level for w in self.weak}, reverse=True)


def penalty(program: WcProgram, i: frozenset, level: int) -> float:
    return sum(w.weight for w in program.weak if w.level == level and satisfies(i, w.formula))


def penalty_profile(program: WcProgram, i: frozenset) -> tuple:
    """Penalties from the highest level down."""
    return tuple(penalty(program, i, l) for l in program.levels())


def _profile_dominates(better: tuple, worse: tuple, eps: float) -> bool:
    for a, b in zip(better, worse):
        if a < b - eps:
            return True
        if abs(a - b) > eps:
            return False
    return False


def dominated(program: WcProgram, i: frozenset, other: frozenset, eps: float = EPS) -> bool:
    """True when `other` beats `i` at some level and ties at every higher one."""
    return _profile_dominates(penalty_profile(program, other), penalty_profile(program, i), eps)


def optimal_models(program: WcProgram, signature=None, *, eps: float = EPS, **caps) -> list:
    sig = set(program.signature()) | set(signature or ())
    models = enumerate_stable(program.base, sig, **caps)
    profiles = [penalty_profile(program, m) for m in models]
    return [m for m, p in zip(models, profiles)
            if not any(_profile_dominates(q, p, eps) for q in profiles)]
