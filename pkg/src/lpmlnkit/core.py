"""Terms, atoms, formulas and weighted programs.

All nodes are frozen dataclasses, so structurally equal formulas compare and
hash equal.  Atoms double as formula leaves.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Union


# ---------------------------------------------------------------- terms

@dataclass(frozen=True, slots=True)
class Sym:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Num:
    """Integer or rational constant, stored as a normalized Fraction."""
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    def __str__(self) -> str:
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    sort: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Arith:
    """`left + right` or `left - right`; evaluated away during grounding."""
    op: str
    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        return f"{_term_operand(self.left)} {self.op} {_term_operand(self.right)}"


def _term_operand(t: "Term") -> str:
    return f"({t})" if isinstance(t, Arith) else str(t)


Term = Union[Sym, Num, Var, Arith]


def term_key(t: Term) -> tuple:
    if isinstance(t, Num):
        return (0, t.value, "")
    if isinstance(t, Sym):
        return (1, 0, t.name)
    return (2, 0, str(t))


# ---------------------------------------------------------------- formulas

@dataclass(frozen=True, slots=True)
class Atom:
    predicate: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(a) for a in self.args)})"


def atom_key(a: Atom) -> tuple:
    return (a.predicate, len(a.args), tuple(term_key(t) for t in a.args))


@dataclass(frozen=True, slots=True)
class Bot:
    pass


@dataclass(frozen=True, slots=True)
class Top:
    pass


BOT = Bot()
TOP = Top()


@dataclass(frozen=True, slots=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"


COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")


@dataclass(frozen=True, slots=True)
class Comparison:
    lhs: Term
    op: str
    rhs: Term


@dataclass(frozen=True, slots=True)
class CountAgg:
    """`target = #count{ X : p(X) ; ... }`; each element binds its variable."""
    target: Term
    elements: tuple  # of (Var, Atom)


@dataclass(frozen=True, slots=True)
class SumAgg:
    """`target = #sum{ w : a ; ... }` over rational weights."""
    target: Term
    elements: tuple  # of (Fraction, Atom)


Formula = Union[Atom, Bot, Top, Not, And, Or, Implies, Comparison, CountAgg, SumAgg]


def conj(items: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; Top when empty."""
    out = None
    for f in items:
        out = f if out is None else And(out, f)
    return TOP if out is None else out


def disj(items: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; Bot when empty."""
    out = None
    for f in items:
        out = f if out is None else Or(out, f)
    return BOT if out is None else out


def choice(f: Formula) -> Formula:
    return Or(f, Not(f))


def conjuncts(f: Formula) -> list:
    if isinstance(f, And):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]


def disjuncts(f: Formula) -> list:
    if isinstance(f, Or):
        return disjuncts(f.left) + disjuncts(f.right)
    return [f]


def iter_atoms(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Not):
        yield from iter_atoms(f.arg)
    elif isinstance(f, (And, Or, Implies)):
        yield from iter_atoms(f.left)
        yield from iter_atoms(f.right)
    elif isinstance(f, (CountAgg, SumAgg)):
        for _, a in f.elements:
            yield a


def atoms_of(f: Formula) -> set:
    return set(iter_atoms(f))


def _term_vars(t: Term) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    elif isinstance(t, Arith):
        yield from _term_vars(t.left)
        yield from _term_vars(t.right)


def free_vars(f: Formula) -> list:
    """Free variables in first-occurrence order (aggregate binders excluded)."""
    seen: dict = {}

    def visit(g):
        if isinstance(g, Atom):
            for t in g.args:
                for v in _term_vars(t):
                    seen.setdefault(v, None)
        elif isinstance(g, Not):
            visit(g.arg)
        elif isinstance(g, (And, Or, Implies)):
            visit(g.left)
            visit(g.right)
        elif isinstance(g, Comparison):
            for t in (g.lhs, g.rhs):
                for v in _term_vars(t):
                    seen.setdefault(v, None)
        elif isinstance(g, CountAgg):
            for v in _term_vars(g.target):
                seen.setdefault(v, None)
            for binder, a in g.elements:
                for t in a.args:
                    for v in _term_vars(t):
                        if v != binder:
                            seen.setdefault(v, None)
        elif isinstance(g, SumAgg):
            for v in _term_vars(g.target):
                seen.setdefault(v, None)
            for _, a in g.elements:
                for t in a.args:
                    for v in _term_vars(t):
                        seen.setdefault(v, None)

    visit(f)
    return list(seen)


# ---------------------------------------------------------------- rule form

@dataclass(frozen=True, slots=True)
class RuleParts:
    """`h1 ; ... ; hk :- p1, ..., pm, not n1, ..., not nj` (k = 0 is a constraint)."""
    head: tuple
    pos: tuple
    neg: tuple

    def body_formula(self) -> Formula:
        return conj(list(self.pos) + [Not(a) for a in self.neg])

    def head_formula(self) -> Formula:
        return disj(self.head)


def rule_parts(f: Formula) -> RuleParts | None:
    """Split a rule-form formula into head and body literals.

    Returns None when the formula is not a rule.  A body containing Bot is a
    rule that can never fire; it is reported with a Bot marker in `neg` so
    callers can drop it (see `is_vacuous`).
    """
    if isinstance(f, Bot):
        return RuleParts((), (), ())
    if isinstance(f, Atom) or isinstance(f, Or):
        head = _head_atoms(f)
        return None if head is None else RuleParts(head, (), ())
    if isinstance(f, Not):
        body = _body_literals(f.arg)
        return None if body is None else RuleParts((), *body)
    if isinstance(f, Implies):
        head = _head_atoms(f.right)
        body = _body_literals(f.left)
        if head is None or body is None:
            return None
        return RuleParts(head, *body)
    return None


def is_vacuous(r: RuleParts) -> bool:
    return BOT in r.neg


def _head_atoms(f: Formula):
    if isinstance(f, Bot):
        return ()
    out = []
    for d in disjuncts(f):
        if isinstance(d, Atom):
            out.append(d)
        elif not isinstance(d, Bot):
            return None
    return tuple(out)


def _body_literals(f: Formula):
    pos, neg = [], []
    for c in conjuncts(f):
        if isinstance(c, Atom):
            pos.append(c)
        elif isinstance(c, Not) and isinstance(c.arg, Atom):
            neg.append(c.arg)
        elif isinstance(c, Top):
            continue
        elif isinstance(c, Bot) or (isinstance(c, Not) and isinstance(c.arg, Top)):
            neg.append(BOT)
        elif isinstance(c, Not) and isinstance(c.arg, Bot):
            continue
        else:
            return None
    return tuple(pos), tuple(neg)


# ---------------------------------------------------------------- weights and programs

@dataclass(frozen=True, slots=True)
class Hard:
    def __str__(self) -> str:
        return "alpha"


HARD = Hard()


@dataclass(frozen=True, slots=True)
class Soft:
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))

    def __str__(self) -> str:
        v = self.value
        if v.is_integer() and abs(v) < 1e15:
            return str(int(v))
        r = repr(v)
        if "e" in r or "n" in r:
            # exponent notation does not lex; an exact fraction round-trips
            f = Fraction(v)
            return f"{f.numerator}/{f.denominator}"
        return r


Weight = Union[Hard, Soft]


def is_hard(w: Weight) -> bool:
    return isinstance(w, Hard)


@dataclass(frozen=True)
class WeightedFormula:
    index: int
    weight: Weight
    formula: Formula


@dataclass(frozen=True)
class LpmlnProgram:
    sorts: dict = field(default_factory=dict)      # name -> tuple of ground terms
    variables: dict = field(default_factory=dict)  # name -> sort name
    rules: tuple = ()

    def is_ground(self) -> bool:
        return all(not free_vars(r.formula) for r in self.rules)
