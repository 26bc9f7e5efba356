"""Brute-force reference implementations and a random program generator.

Nothing here calls the engine modules; only the AST types are shared.
Interpretations are bitmasks over a sorted atom list, and the reduct and
satisfaction routines are written from scratch so that agreement with the
engine means something.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .core import (
    HARD, And, Atom, Bot, Implies, Not, Or, Soft, Top, WeightedFormula,
    atom_key, conj, disj, iter_atoms,
)
from .errors import CapExceeded
from .grounder import GroundProgram

BRUTE_CAP = 16


class _Universe:
    def __init__(self, atoms):
        self.atoms = sorted(set(atoms), key=atom_key)
        if len(self.atoms) > BRUTE_CAP:
            raise CapExceeded(f"brute force limited to {BRUTE_CAP} atoms")
        self.bit = {a: 1 << k for k, a in enumerate(self.atoms)}

    def decode(self, mask: int) -> frozenset:
        return frozenset(a for a in self.atoms if mask & self.bit[a])

    def encode(self, model) -> int:
        return sum(self.bit[a] for a in model)

    def masks(self):
        return range(1 << len(self.atoms))


def _truth(f, mask: int, bit: dict) -> bool:
    kind = type(f)
    if kind is Atom:
        return bool(mask & bit[f])
    if kind is Not:
        return not _truth(f.arg, mask, bit)
    if kind is And:
        return _truth(f.left, mask, bit) and _truth(f.right, mask, bit)
    if kind is Or:
        return _truth(f.left, mask, bit) or _truth(f.right, mask, bit)
    if kind is Implies:
        return (not _truth(f.left, mask, bit)) or _truth(f.right, mask, bit)
    if kind is Top:
        return True
    if kind is Bot:
        return False
    raise TypeError(f"oracle cannot evaluate {f!r}")


_FALSE = ("F",)


def _reduce(f, mask: int, bit: dict):
    """Reduct as a nested tuple: ("F",), ("A", bit), ("&"|"|"|">", l, r)."""
    if not _truth(f, mask, bit):
        return _FALSE
    kind = type(f)
    if kind is Atom:
        return ("A", bit[f])
    if kind is Top:
        return ("T",)
    if kind is Not:
        return (">", _reduce(f.arg, mask, bit), _FALSE)
    tag = {And: "&", Or: "|", Implies: ">"}[kind]
    return (tag, _reduce(f.left, mask, bit), _reduce(f.right, mask, bit))


def _holds(r, mask: int) -> bool:
    tag = r[0]
    if tag == "A":
        return bool(mask & r[1])
    if tag == "F":
        return False
    if tag == "T":
        return True
    if tag == "&":
        return _holds(r[1], mask) and _holds(r[2], mask)
    if tag == "|":
        return _holds(r[1], mask) or _holds(r[2], mask)
    return (not _holds(r[1], mask)) or _holds(r[2], mask)


def _stable_mask(formulas, mask: int, bit: dict) -> bool:
    if not all(_truth(f, mask, bit) for f in formulas):
        return False
    reducts = [_reduce(f, mask, bit) for f in formulas]
    sub = (mask - 1) & mask
    while True:
        if sub != mask and all(_holds(r, sub) for r in reducts):
            return False
        if sub == 0:
            return True
        sub = (sub - 1) & mask


def brute_stable(formulas, signature=()) -> set:
    """Stable models by checking every interpretation against every subset."""
    formulas = list(formulas)
    atoms = set(signature)
    for f in formulas:
        atoms.update(iter_atoms(f))
    u = _Universe(atoms)
    return {u.decode(m) for m in u.masks() if _stable_mask(formulas, m, u.bit)}


def brute_sm(gp: GroundProgram) -> dict:
    """Every candidate of an LP^MLN program mapped to (hard count, soft sum)."""
    u = _Universe(gp.signature)
    out = {}
    for m in u.masks():
        sat = [r for r in gp.rules if _truth(r.formula, m, u.bit)]
        if _stable_mask([r.formula for r in sat], m, u.bit):
            k = sum(1 for r in sat if r.weight == HARD)
            s = math.fsum(r.weight.value for r in sat if r.weight != HARD)
            out[u.decode(m)] = (k, s)
    return out


def brute_probabilities(gp: GroundProgram, alpha: float | None = None) -> dict:
    """Probabilities straight from the weight formula.

    With `alpha` given, hard rules weigh `alpha` and every candidate keeps
    some mass; without it the limit is taken by hand.
    """
    cands = brute_sm(gp)
    if not cands:
        return {}
    if alpha is None:
        k_max = max(k for k, _ in cands.values())
        logw = {m: s for m, (k, s) in cands.items() if k == k_max}
    else:
        logw = {m: alpha * k + s for m, (k, s) in cands.items()}
    top = max(logw.values())
    z = math.fsum(math.exp(v - top) for v in logw.values())
    return {m: (math.exp(logw[m] - top) / z if m in logw else 0.0) for m in cands}


def brute_map_lpmln(gp: GroundProgram, eps: float = 1e-9) -> set:
    cands = brute_sm(gp)
    if not cands:
        return set()
    k_max = max(k for k, _ in cands.values())
    best = max(s for k, s in cands.values() if k == k_max)
    return {m for m, (k, s) in cands.items() if k == k_max and s >= best - eps}


def brute_map_mln(gp: GroundProgram, eps: float = 1e-9) -> set:
    """Most probable worlds of a Markov logic network: classical models,
    ranked by satisfied hard formulas and then by soft weight."""
    u = _Universe(gp.signature)
    scored = {}
    for m in u.masks():
        sat = [r for r in gp.rules if _truth(r.formula, m, u.bit)]
        k = sum(1 for r in sat if r.weight == HARD)
        s = math.fsum(r.weight.value for r in sat if r.weight != HARD)
        scored[m] = (k, s)
    k_max = max(k for k, _ in scored.values())
    best = max(s for k, s in scored.values() if k == k_max)
    return {u.decode(m) for m, (k, s) in scored.items() if k == k_max and s >= best - eps}


def brute_optimal(base, weak, signature=(), eps: float = 1e-9) -> set:
    """Optimal stable models of base formulas under (formula, weight, level) penalties."""
    models = brute_stable(base, set(signature) | {a for f, _, _ in weak for a in iter_atoms(f)})
    if not models:
        return set()
    atoms = set(signature)
    for m in models:
        atoms |= m
    for f in base:
        atoms.update(iter_atoms(f))
    for f, _, _ in weak:
        atoms.update(iter_atoms(f))
    u = _Universe(atoms)
    levels = sorted({lv for _, _, lv in weak}, reverse=True)

    def profile(model):
        m = u.encode(model)
        return [math.fsum(w for f, w, lv in weak if lv == level and _truth(f, m, u.bit))
                for level in levels]

    profiles = {m: profile(m) for m in models}

    def beats(a, b):
        for x, y in zip(a, b):
            if x < y - eps:
                return True
            if abs(x - y) > eps:
                return False
        return False

    return {m for m in models if not any(beats(q, profiles[m]) for q in profiles.values())}


# ---------------------------------------------------------------- random programs

DEFAULT_PALETTE = (HARD, Soft(-3), Soft(-2), Soft(-1.5), Soft(-1), Soft(-0.5), Soft(0.5),
                   Soft(1), Soft(1.5), Soft(2), Soft(3))


@dataclass(frozen=True)
class GeneratorConfig:
    atoms: int = 4
    rules: int = 5
    palette: tuple = DEFAULT_PALETTE
    depth: int = 2
    rule_form: bool = True
    max_head: int = 2
    max_body: int = 3
    seed: int = 0


def gen_program(cfg: GeneratorConfig) -> GroundProgram:
    """Random ground program; the same config always yields the same program."""
    rng = random.Random(cfg.seed)
    atoms = [Atom(f"p{k}") for k in range(1, cfg.atoms + 1)]
    rules = []
    if atoms:
        for k in range(1, cfg.rules + 1):
            f = _gen_rule(rng, atoms, cfg) if cfg.rule_form else _gen_formula(rng, atoms, cfg.depth)
            rules.append(WeightedFormula(k, rng.choice(cfg.palette), f))
    sig = set(atoms)
    for r in rules:
        sig.update(iter_atoms(r.formula))
    return GroundProgram(tuple(rules), frozenset(sig), {r.index: r.index for r in rules})


def _gen_rule(rng: random.Random, atoms: list, cfg: GeneratorConfig):
    head = rng.sample(atoms, rng.randint(0, min(cfg.max_head, len(atoms))))
    body = [a if rng.random() < 0.6 else Not(a)
            for a in rng.sample(atoms, rng.randint(0, min(cfg.max_body, len(atoms))))]
    if not body:
        return disj(head)
    return Implies(conj(body), disj(head))


def _gen_formula(rng: random.Random, atoms: list, depth: int):
    if depth <= 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.06:
            return Top() if rng.random() < 0.5 else Bot()
        return rng.choice(atoms)
    kind = rng.choice(("not", "and", "or", "imp", "imp"))
    if kind == "not":
        return Not(_gen_formula(rng, atoms, depth - 1))
    cls = {"and": And, "or": Or, "imp": Implies}[kind]
    return cls(_gen_formula(rng, atoms, depth - 1), _gen_formula(rng, atoms, depth - 1))
