"""Reader and printer for the textual LP^MLN format.

    sort door = {1..4}.
    var D, E : door.
    alpha :: :- prize(D), prize(E), D != E.
    10 :: q :- p.
    -20 :: :- not r.
    1.5 :: p -> (q | not r).

`H :- B1, ..., Bn` stands for `B1 & ... & Bn -> H`; `;` separates head
disjuncts.  Printing and re-reading any program yields an equal AST.
"""
from __future__ import annotations

from fractions import Fraction

from .core import (
    BOT, COMPARISON_OPS, HARD, TOP, And, Arith, Atom, Bot, Comparison, CountAgg,
    Formula, Implies, LpmlnProgram, Not, Num, Or, Soft, SumAgg, Sym, Top, Var,
    WeightedFormula,
)
from .errors import ParseError
from .lexer import TokenStream

KEYWORDS = {"not", "bot", "top", "alpha"}


def parse_number(text: str) -> Fraction:
    return Fraction(text)


class FormulaParser:
    """Recursive-descent parser for terms and formulas over a token stream.

    `var_sorts` resolves variable names to sorts; unknown variables are an
    error unless `infer` is given, in which case it is called to pick a sort.
    """

    def __init__(self, ts: TokenStream, var_sorts: dict, infer=None):
        self.ts = ts
        self.var_sorts = var_sorts
        self.infer = infer

    # terms
    def variable(self, tok) -> Var:
        sort = self.var_sorts.get(tok.text)
        if sort is None and self.infer is not None:
            sort = self.infer(tok.text)
        if sort is None:
            raise ParseError(f"undeclared variable {tok.text}", tok.line, tok.col)
        return Var(tok.text, sort)

    def simple_term(self):
        ts = self.ts
        t = ts.peek()
        if t.kind == "NUMBER":
            ts.next()
            return Num(parse_number(t.text))
        if ts.at("-") and ts.peek(1).kind == "NUMBER":
            ts.next()
            return Num(-parse_number(ts.next().text))
        if t.kind == "VAR":
            ts.next()
            return self.variable(t)
        if t.kind == "IDENT" and t.text not in KEYWORDS:
            ts.next()
            if ts.at("("):
                ts.error("function terms are not supported")
            return Sym(t.text)
        if ts.accept("("):
            inner = self.term()
            ts.expect(")")
            return inner
        ts.error(f"expected a term, found {t.text or 'end of input'!r}")

    def term(self):
        left = self.simple_term()
        while self.ts.at("+") or self.ts.at("-"):
            op = self.ts.next().text
            left = Arith(op, left, self.simple_term())
        return left

    def atom(self) -> Atom:
        name = self.ts.expect_kind("IDENT")
        if name.text in KEYWORDS:
            raise ParseError(f"{name.text!r} is reserved", name.line, name.col)
        args = []
        if self.ts.accept("("):
            args.append(self.term())
            while self.ts.accept(","):
                args.append(self.term())
            self.ts.expect(")")
        return Atom(name.text, tuple(args))

    # formulas, loosest binding first
    def formula(self) -> Formula:
        left = self.disjunction()
        if self.ts.accept("->"):
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.ts.accept("|"):
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.ts.accept("&"):
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.ts.accept("not"):
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        ts = self.ts
        t = ts.peek()
        if ts.accept("bot"):
            return BOT
        if ts.accept("top"):
            return TOP
        if ts.at("("):
            # either a parenthesized formula or a parenthesized term in a comparison
            save = ts.i
            ts.next()
            try:
                inner = self.formula()
                ts.expect(")")
                if not self._at_comparison():
                    return inner
            except ParseError:
                pass
            ts.i = save
            return self.comparison(self.term())
        if t.kind == "AGG":
            # aggregate written first: #count{...} = N
            agg = self.aggregate(None)
            ts.expect("=")
            return type(agg)(self.term(), agg.elements)
        if t.kind == "IDENT" and ts.peek(1).text != "(" and self._at_comparison(1):
            return self.comparison(self.term())
        if t.kind == "IDENT":
            return self.atom()
        return self.comparison(self.term())

    def _at_comparison(self, k: int = 0) -> bool:
        t = self.ts.peek(k)
        return t.kind == "OP" and t.text in COMPARISON_OPS

    def comparison(self, lhs) -> Formula:
        ts = self.ts
        op = ts.peek()
        if not self._at_comparison():
            ts.error(f"expected a comparison operator, found {op.text or 'end of input'!r}")
        ts.next()
        if ts.peek().kind == "AGG":
            if op.text != "=":
                raise ParseError("aggregates only support '='", op.line, op.col)
            return self.aggregate(lhs)
        return Comparison(lhs, op.text, self.term())

    def aggregate(self, target) -> Formula:
        ts = self.ts
        kind = ts.next().text
        ts.expect("{")
        elements = []
        if not ts.at("}"):
            while True:
                if kind == "#count":
                    v = ts.expect_kind("VAR")
                    binder = self.variable(v)
                    ts.expect(":")
                    elements.append((binder, self.atom()))
                else:
                    w = self.simple_term()
                    if not isinstance(w, Num):
                        ts.error("#sum weights must be numbers")
                    ts.expect(":")
                    elements.append((w.value, self.atom()))
                if not ts.accept(";"):
                    break
        ts.expect("}")
        cls = CountAgg if kind == "#count" else SumAgg
        return cls(target, tuple(elements))

    # rule syntax
    def statement_body(self) -> Formula:
        """`H1 ; ... ; Hk [:- B1, ..., Bn]` or `:- B1, ..., Bn`."""
        ts = self.ts
        heads = []
        if not ts.at(":-"):
            heads.append(self.formula())
            while ts.accept(";"):
                heads.append(self.formula())
        head = _fold(Or, heads) if heads else BOT
        if ts.accept(":-"):
            body = [self.formula()]
            while ts.accept(","):
                body.append(self.formula())
            return Implies(_fold(And, body), head)
        if not heads:
            ts.error("empty rule")
        return head


def _fold(cls, items):
    out = items[0]
    for f in items[1:]:
        out = cls(out, f)
    return out


def parse_sort_values(ts: TokenStream) -> tuple:
    ts.expect("{")
    values = []
    fp = FormulaParser(ts, {})
    while True:
        t = fp.simple_term()
        if isinstance(t, Var):
            ts.error("sort values must be ground")
        if ts.accept(".."):
            hi = fp.simple_term()
            if not (isinstance(t, Num) and isinstance(hi, Num)
                    and t.value.denominator == 1 and hi.value.denominator == 1):
                ts.error("ranges need integer bounds")
            values.extend(Num(k) for k in range(int(t.value), int(hi.value) + 1))
        else:
            values.append(t)
        if not ts.accept(","):
            break
    ts.expect("}")
    seen, out = set(), []
    for v in values:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return tuple(out)


def parse_weight(ts: TokenStream):
    if ts.accept("alpha"):
        return HARD
    neg = ts.accept("-")
    t = ts.expect_kind("NUMBER")
    value = float(parse_number(t.text))
    return Soft(-value if neg else value)


def parse_lpmln(text: str) -> LpmlnProgram:
    ts = TokenStream(text)
    sorts: dict = {}
    variables: dict = {}
    rules = []
    while ts.peek().kind != "EOF":
        if ts.at("sort") and ts.peek(1).kind == "IDENT" and ts.peek(2).text == "=":
            ts.next()
            name = ts.next().text
            ts.expect("=")
            sorts[name] = parse_sort_values(ts)
            ts.expect(".")
        elif ts.at("var") and ts.peek(1).kind == "VAR":
            ts.next()
            names = [ts.expect_kind("VAR").text]
            while ts.accept(","):
                names.append(ts.expect_kind("VAR").text)
            ts.expect(":")
            s = ts.expect_kind("IDENT")
            if s.text not in sorts:
                raise ParseError(f"unknown sort {s.text}", s.line, s.col)
            for n in names:
                variables[n] = s.text
            ts.expect(".")
        else:
            w = parse_weight(ts)
            ts.expect("::")
            f = FormulaParser(ts, variables).statement_body()
            ts.expect(".")
            rules.append(WeightedFormula(len(rules) + 1, w, f))
    return LpmlnProgram(sorts, variables, tuple(rules))


def parse_formula(text: str, variables: dict | None = None) -> Formula:
    ts = TokenStream(text)
    f = FormulaParser(ts, variables or {}).formula()
    if ts.peek().kind != "EOF":
        ts.error(f"unexpected {ts.peek().text!r}")
    return f


def parse_statement(text: str, variables: dict | None = None) -> Formula:
    """One statement in rule syntax, without weight or final period."""
    ts = TokenStream(text)
    f = FormulaParser(ts, variables or {}).statement_body()
    if ts.peek().kind != "EOF":
        ts.error(f"unexpected {ts.peek().text!r}")
    return f


# ---------------------------------------------------------------- printing

_PREC = {Implies: 1, Or: 2, And: 3, Not: 4}


def format_formula(f: Formula, ctx: int = 0) -> str:
    """Fully faithful infix form; parentheses only where precedence needs them."""
    if isinstance(f, Atom):
        return str(f)
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Comparison):
        s = f"{f.lhs} {f.op} {f.rhs}"
        return s
    if isinstance(f, CountAgg):
        body = " ; ".join(f"{v} : {a}" for v, a in f.elements)
        return f"{f.target} = #count{{{body}}}"
    if isinstance(f, SumAgg):
        body = " ; ".join(f"{Num(w)} : {a}" for w, a in f.elements)
        return f"{f.target} = #sum{{{body}}}"
    p = _PREC[type(f)]
    if isinstance(f, Not):
        s = "not " + format_formula(f.arg, p)
    elif isinstance(f, Implies):
        # right associative
        s = f"{format_formula(f.left, p + 1)} -> {format_formula(f.right, p)}"
    else:
        op = " | " if isinstance(f, Or) else " & "
        s = f"{format_formula(f.left, p)}{op}{format_formula(f.right, p + 1)}"
    return f"({s})" if p < ctx else s


def _left_spine(f: Formula, cls) -> list:
    out = []
    while isinstance(f, cls):
        out.append(f.right)
        f = f.left
    out.append(f)
    return out[::-1]


def _element(f: Formula) -> str:
    s = format_formula(f)
    simple = isinstance(f, (Atom, Bot, Top, Comparison, CountAgg, SumAgg)) or (
        isinstance(f, Not) and isinstance(f.arg, Atom))
    return s if simple else f"({s})"


def format_statement(f: Formula) -> str:
    """Rule syntax where the formula has rule shape, formula syntax otherwise."""
    if isinstance(f, Implies):
        body = ", ".join(_element(b) for b in _left_spine(f.left, And))
        if isinstance(f.right, Bot):
            return f":- {body}"
        head = " ; ".join(_element(h) for h in _left_spine(f.right, Or))
        return f"{head} :- {body}"
    if isinstance(f, Or):
        return " ; ".join(_element(h) for h in _left_spine(f, Or))
    return _element(f)


def format_sort(name: str, values: tuple) -> str:
    return f"sort {name} = {{{', '.join(str(v) for v in values)}}}."


def print_lpmln(program: LpmlnProgram) -> str:
    lines = [format_sort(n, vs) for n, vs in program.sorts.items()]
    by_sort: dict = {}
    for v, s in program.variables.items():
        by_sort.setdefault(s, []).append(v)
    lines += [f"var {', '.join(vs)} : {s}." for s, vs in by_sort.items()]
    lines += [f"{r.weight} :: {format_statement(r.formula)}." for r in program.rules]
    return "\n".join(lines) + ("\n" if lines else "")
