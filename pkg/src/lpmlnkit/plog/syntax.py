"""P-log programs: data types, reader and grounding.

    sort door = {1..4}.
    attr prize : -> door.
    attr canOpen : door -> bool.
    ~canOpen(D) :- selected = D.
    canOpen(D) :- not ~canOpen(D).
    [r1] random(prize).
    [r3] random(open : {X : canOpen(X)}).
    pr[r1](prize = 1) = 3/10.
    obs(selected = 1).  obs(prize != 2).  do(selected = 2).

Variable sorts are inferred from the positions they occupy (attribute
arguments or values); `var` declarations are accepted but optional.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from ..core import Comparison, Sym, Var
from ..errors import ParseError
from ..grounder import compare, eval_term
from ..lexer import TokenStream
from ..syntax import FormulaParser, parse_number, parse_sort_values

BOOL = "bool"
TRUE, FALSE = Sym("t"), Sym("f")


@dataclass(frozen=True)
class Attribute:
    name: str
    arg_sorts: tuple
    range_sort: str


@dataclass(frozen=True)
class AttrAtom:
    """c(u) = v"""
    attr: str
    args: tuple
    value: object

    def __str__(self) -> str:
        c = f"{self.attr}({','.join(map(str, self.args))})" if self.args else self.attr
        return f"{c}={self.value}"

    @property
    def term(self) -> tuple:
        return (self.attr, self.args)


@dataclass(frozen=True)
class Lit:
    atom: AttrAtom
    positive: bool = True

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"not {self.atom}"


@dataclass(frozen=True)
class PlogRule:
    head: AttrAtom | None
    body: tuple  # of Lit | Comparison


@dataclass(frozen=True)
class RandomRule:
    rid: str
    attr: str
    args: tuple
    pred: str | None
    body: tuple

    @property
    def term(self) -> tuple:
        return (self.attr, self.args)


@dataclass(frozen=True)
class PrAtom:
    rid: str
    atom: AttrAtom
    cond: tuple
    prob: Fraction


@dataclass(frozen=True)
class Observation:
    atom: AttrAtom
    positive: bool = True


@dataclass(frozen=True)
class PlogProgram:
    sorts: dict = field(default_factory=dict)
    attributes: dict = field(default_factory=dict)
    rules: tuple = ()
    random: tuple = ()
    pr: tuple = ()
    obs: tuple = ()
    do: tuple = ()

    def range_of(self, attr: str) -> tuple:
        return self.sorts[self.attributes[attr].range_sort]

    def attribute_terms(self) -> list:
        """Every ground c(u), in declaration order."""
        out = []
        for a in self.attributes.values():
            for args in itertools.product(*(self.sorts[s] for s in a.arg_sorts)):
                out.append((a.name, tuple(args)))
        return out

    def is_ground(self) -> bool:
        items = [*self.rules, *self.random, *self.pr, *self.obs, *self.do]
        return not any(_has_var(x) for x in items)


def _has_var(obj) -> bool:
    if isinstance(obj, Var):
        return True
    if isinstance(obj, (tuple, list)):
        return any(_has_var(x) for x in obj)
    if isinstance(obj, (AttrAtom, Lit, PlogRule, RandomRule, PrAtom, Observation, Comparison)):
        return any(_has_var(getattr(obj, f)) for f in obj.__dataclass_fields__)
    return False


# ---------------------------------------------------------------- reader

class _Reader:
    def __init__(self, text: str):
        self.ts = TokenStream(text)
        self.sorts: dict = {BOOL: (TRUE, FALSE)}
        self.attributes: dict = {}
        self.declared_vars: dict = {}
        self.rules, self.random, self.pr, self.obs, self.do = [], [], [], [], []
        self.local: dict = {}

    # variables: typed by the first attribute position they fill
    def _infer(self, name: str) -> str:
        return self.declared_vars.get(name, "?")

    def _fp(self) -> FormulaParser:
        return FormulaParser(self.ts, {}, infer=self._infer)

    def _type_var(self, t, sort: str):
        if isinstance(t, Var):
            known = self.local.get(t.name)
            if known is None:
                self.local[t.name] = sort
            elif known != sort:
                raise ParseError(f"variable {t.name} used with sorts {known} and {sort}")

    def attr_term(self):
        ts = self.ts
        tok = ts.expect_kind("IDENT")
        if tok.text not in self.attributes:
            raise ParseError(f"unknown attribute {tok.text}", tok.line, tok.col)
        attr = self.attributes[tok.text]
        args = []
        if ts.accept("("):
            fp = self._fp()
            args.append(fp.term())
            while ts.accept(","):
                args.append(fp.term())
            ts.expect(")")
        if len(args) != len(attr.arg_sorts):
            raise ParseError(f"{attr.name} takes {len(attr.arg_sorts)} arguments", tok.line, tok.col)
        for a, s in zip(args, attr.arg_sorts):
            self._type_var(a, s)
        return attr, tuple(args), tok

    def attr_literal(self, allow_neq: bool = False):
        """`c(u) = v`, `c(u) != v`, `c(u)`, `~c(u)`; returns (AttrAtom, is_equality)."""
        ts = self.ts
        strong_neg = ts.accept("~")
        attr, args, tok = self.attr_term()
        if strong_neg or not (ts.at("=") or ts.at("!=")):
            if attr.range_sort != BOOL:
                raise ParseError(f"{attr.name} is not boolean; write {attr.name}(...) = value",
                                 tok.line, tok.col)
            return AttrAtom(attr.name, args, FALSE if strong_neg else TRUE), True
        op = ts.next()
        if op.text == "!=" and not allow_neq:
            raise ParseError("'!=' on attributes is only allowed in obs", op.line, op.col)
        value = self._fp().term()
        self._type_var(value, attr.range_sort)
        return AttrAtom(attr.name, args, value), op.text == "="

    def body_item(self):
        ts = self.ts
        if ts.accept("not"):
            atom, _ = self.attr_literal()
            return Lit(atom, False)
        t = ts.peek()
        if t.text == "~" or (t.kind == "IDENT" and t.text in self.attributes):
            atom, _ = self.attr_literal()
            return Lit(atom)
        fp = self._fp()
        return fp.comparison(fp.term())

    def body(self) -> list:
        items = [self.body_item()]
        while self.ts.accept(","):
            items.append(self.body_item())
        return items

    def statement(self):
        ts = self.ts
        self.local = {}
        if ts.at("sort") and ts.peek(1).kind == "IDENT":
            ts.next()
            name = ts.next().text
            ts.expect("=")
            self.sorts[name] = parse_sort_values(ts)
            ts.expect(".")
        elif ts.at("attr"):
            ts.next()
            name = ts.expect_kind("IDENT")
            ts.expect(":")
            args = []
            while not ts.at("->"):
                s = ts.expect_kind("IDENT")
                args.append(self._sort_name(s))
                if not ts.accept(","):
                    break
            ts.expect("->")
            rng = self._sort_name(ts.expect_kind("IDENT"))
            ts.expect(".")
            self.attributes[name.text] = Attribute(name.text, tuple(args), rng)
        elif ts.at("var") and ts.peek(1).kind == "VAR":
            ts.next()
            names = [ts.expect_kind("VAR").text]
            while ts.accept(","):
                names.append(ts.expect_kind("VAR").text)
            ts.expect(":")
            s = self._sort_name(ts.expect_kind("IDENT"))
            ts.expect(".")
            for n in names:
                self.declared_vars[n] = s
        elif ts.at("["):
            self.random.append(self._finish(self.random_rule()))
        elif ts.at("pr") and ts.peek(1).text == "[":
            self.pr.append(self._finish(self.pr_atom()))
        elif (ts.at("obs") or ts.at("do")) and ts.peek(1).text == "(":
            kind = ts.next().text
            ts.expect("(")
            atom, eq = self.attr_literal(allow_neq=(kind == "obs"))
            ts.expect(")")
            ts.expect(".")
            if kind == "obs":
                self.obs.append(self._finish(Observation(atom, eq)))
            else:
                self.do.append(self._finish(atom))
        else:
            head = None
            if not ts.at(":-"):
                head, eq = self.attr_literal()
            body = self.body() if ts.accept(":-") else []
            ts.expect(".")
            self.rules.append(self._finish(PlogRule(head, tuple(body))))

    def _sort_name(self, tok) -> str:
        if tok.text not in self.sorts:
            raise ParseError(f"unknown sort {tok.text}", tok.line, tok.col)
        return tok.text

    def random_rule(self) -> RandomRule:
        ts = self.ts
        ts.expect("[")
        rid = ts.expect_kind("IDENT").text
        ts.expect("]")
        ts.expect("random")
        ts.expect("(")
        attr, args, _ = self.attr_term()
        pred = None
        if ts.accept(":"):
            ts.expect("{")
            x = ts.expect_kind("VAR").text
            ts.expect(":")
            ptok = ts.expect_kind("IDENT")
            p = self.attributes.get(ptok.text)
            if p is None or len(p.arg_sorts) != 1 or p.range_sort != BOOL:
                raise ParseError(f"{ptok.text} is not a unary boolean attribute", ptok.line, ptok.col)
            ts.expect("(")
            if ts.expect_kind("VAR").text != x:
                ts.error("the range predicate must apply to the set variable")
            ts.expect(")")
            ts.expect("}")
            pred = p.name
        ts.expect(")")
        body = self.body() if ts.accept(":-") else []
        ts.expect(".")
        return RandomRule(rid, attr.name, args, pred, tuple(body))

    def pr_atom(self) -> PrAtom:
        ts = self.ts
        ts.expect("pr")
        ts.expect("[")
        rid = ts.expect_kind("IDENT")
        ts.expect("]")
        ts.expect("(")
        atom, _ = self.attr_literal()
        cond = self.body() if ts.accept("|") else []
        ts.expect(")")
        ts.expect("=")
        num = ts.expect_kind("NUMBER")
        p = parse_number(num.text)
        if not 0 <= p <= 1:
            raise ParseError(f"probability {p} outside [0, 1]", num.line, num.col)
        ts.expect(".")
        return PrAtom(rid.text, atom, tuple(cond), p)

    def _finish(self, item):
        """Give every variable the sort inferred for it in this statement."""
        missing = [n for n, s in self.local.items() if s == "?"]
        if missing:
            raise ParseError(f"cannot infer the sort of {', '.join(missing)}")
        return _retype(item, self.local)

    def program(self) -> PlogProgram:
        while self.ts.peek().kind != "EOF":
            self.statement()
        prog = PlogProgram(dict(self.sorts), dict(self.attributes), tuple(self.rules),
                           tuple(self.random), tuple(self.pr), tuple(self.obs), tuple(self.do))
        _validate(prog)
        return prog


def _retype(obj, local: dict):
    if isinstance(obj, Var):
        sort = local.get(obj.name, obj.sort)
        if sort == "?":
            raise ParseError(f"cannot infer the sort of {obj.name}")
        return Var(obj.name, sort)
    if isinstance(obj, tuple):
        return tuple(_retype(x, local) for x in obj)
    if isinstance(obj, (AttrAtom, Lit, PlogRule, RandomRule, PrAtom, Observation, Comparison)):
        return type(obj)(*(_retype(getattr(obj, f), local) for f in obj.__dataclass_fields__))
    return obj


def _validate(prog: PlogProgram) -> None:
    ids: dict = {}
    for r in prog.random:
        if r.rid in ids and ids[r.rid] != r.attr:
            raise ParseError(f"random rule id {r.rid} names rules for different attributes")
        ids[r.rid] = r.attr

    def check_atom(a: AttrAtom):
        if not isinstance(a.value, Var) and a.value not in prog.range_of(a.attr):
            raise ParseError(f"value {a.value} outside the range of {a.attr}")
        for t, s in zip(a.args, prog.attributes[a.attr].arg_sorts):
            if not isinstance(t, Var) and t not in prog.sorts[s]:
                raise ParseError(f"argument {t} of {a.attr} is not in sort {s}")

    for item in [*prog.rules, *prog.random, *prog.pr, *prog.obs, *prog.do]:
        for a in _attr_atoms(item):
            check_atom(a)
    for p in prog.pr:
        if p.rid not in ids:
            raise ParseError(f"pr-atom refers to unknown random rule {p.rid}")
        if ids[p.rid] != p.atom.attr:
            raise ParseError(f"pr-atom for {p.atom.attr} refers to rule {p.rid} for {ids[p.rid]}")


def _attr_atoms(obj):
    if isinstance(obj, AttrAtom):
        yield obj
    elif isinstance(obj, tuple):
        for x in obj:
            yield from _attr_atoms(x)
    elif isinstance(obj, (Lit, PlogRule, RandomRule, PrAtom, Observation)):
        for f in obj.__dataclass_fields__:
            yield from _attr_atoms(getattr(obj, f))


def parse_plog(text: str) -> PlogProgram:
    return _Reader(text).program()


# ---------------------------------------------------------------- grounding

def _vars_of(obj, out: dict) -> dict:
    if isinstance(obj, Var):
        out.setdefault(obj, None)
    elif isinstance(obj, tuple):
        for x in obj:
            _vars_of(x, out)
    elif isinstance(obj, (AttrAtom, Lit, PlogRule, RandomRule, PrAtom, Observation, Comparison)):
        for f in obj.__dataclass_fields__:
            _vars_of(getattr(obj, f), out)
    return out


def _subst(obj, env: dict):
    if isinstance(obj, Var):
        return env[obj]
    if isinstance(obj, tuple):
        return tuple(_subst(x, env) for x in obj)
    if isinstance(obj, (AttrAtom, Lit, PlogRule, RandomRule, PrAtom, Observation)):
        return type(obj)(*(_subst(getattr(obj, f), env) for f in obj.__dataclass_fields__))
    if isinstance(obj, Comparison):
        return Comparison(eval_term(obj.lhs, env), obj.op, eval_term(obj.rhs, env))
    return obj


def _settle(body: tuple):
    """Evaluate ground comparisons: None if one fails, else the remaining literals."""
    out = []
    for b in body:
        if isinstance(b, Comparison):
            if not compare(b.lhs, b.op, b.rhs):
                return None
        else:
            out.append(b)
    return tuple(out)


def _instances(prog: PlogProgram, item):
    variables = list(_vars_of(item, {}))
    for values in itertools.product(*(prog.sorts[v.sort] for v in variables)):
        g = _subst(item, dict(zip(variables, values)))
        if isinstance(g, AttrAtom):
            yield g
            continue
        if isinstance(g, (PlogRule, RandomRule)):
            body = _settle(g.body)
            if body is None:
                continue
            g = type(g)(*[body if f == "body" else getattr(g, f) for f in g.__dataclass_fields__])
        if isinstance(g, PrAtom):
            cond = _settle(g.cond)
            if cond is None:
                continue
            g = PrAtom(g.rid, g.atom, cond, g.prob)
        yield g


def ground_plog(prog: PlogProgram) -> PlogProgram:
    """Replace every schematic statement by its instances over the sorts."""
    if prog.is_ground() and not any(isinstance(b, Comparison)
                                    for r in [*prog.rules, *prog.random] for b in r.body):
        return prog

    def each(items):
        out = []
        for it in items:
            for g in _instances(prog, it):
                if g not in out:
                    out.append(g)
        return tuple(out)

    return PlogProgram(prog.sorts, prog.attributes, each(prog.rules), each(prog.random),
                       tuple(g for it in prog.pr for g in _instances(prog, it)),
                       each(prog.obs), each(prog.do))
