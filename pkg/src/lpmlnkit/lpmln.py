"""Probabilistic stable models of ground LP^MLN programs.

An interpretation I is a candidate when it is a stable model of the rules
it satisfies; its weight pairs the number of hard rules it satisfies with
the sum of the satisfied soft weights.  Probabilities are the limit as the
hard weight grows without bound: only candidates with the most satisfied
hard rules keep mass, shared in proportion to exp(soft sum).

When some candidate satisfies every hard rule, the candidates that do are
exactly the stable models of "hard rules as written, soft rules as
choices", which is much cheaper to enumerate than all candidates.  The
full candidate set is only built when the hard rules clash.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Formula, choice, is_hard
from .errors import InconsistentProgram
from .grounder import GroundProgram
from .stable import EPS, enumerate_stable, is_stable_relative, model_key, satisfies


@dataclass(frozen=True, order=True)
class WeightPair:
    hard: int
    soft: float

    def exp(self) -> str:
        return f"e^({self.hard}a + {self.soft:g})"


@dataclass(frozen=True)
class Entry:
    model: frozenset
    weight: WeightPair
    probability: float


@dataclass(frozen=True)
class ModelTable:
    entries: tuple
    k_max: int

    def probability(self, model) -> float:
        for e in self.entries:
            if e.model == model:
                return e.probability
        return 0.0

    def as_dict(self) -> dict:
        return {e.model: e.probability for e in self.entries}


def sm_set(gp: GroundProgram, **caps) -> list:
    """Every interpretation that is a stable model of the rules it satisfies."""
    return enumerate_stable([choice(r.formula) for r in gp.rules], gp.signature, **caps)


def weight(gp: GroundProgram, model: frozenset) -> WeightPair | None:
    """Weight pair of a candidate; None (zero weight) for anything else."""
    satisfied = [r for r in gp.rules if satisfies(model, r.formula)]
    if not is_stable_relative([r.formula for r in satisfied], model, model):
        return None
    return _pair(satisfied)


def _pair(satisfied) -> WeightPair:
    k = sum(1 for r in satisfied if is_hard(r.weight))
    s = math.fsum(r.weight.value for r in satisfied if not is_hard(r.weight))
    return WeightPair(k, s)


def _weigh(gp: GroundProgram, models) -> list:
    return [(m, _pair([r for r in gp.rules if satisfies(m, r.formula)])) for m in models]


def candidates(gp: GroundProgram, **caps) -> list:
    """(model, weight) pairs that can carry probability, plus zero-mass ones
    when the hard rules cannot all hold together."""
    hard = [r.formula for r in gp.rules if is_hard(r.weight)]
    soft = [choice(r.formula) for r in gp.rules if not is_hard(r.weight)]
    models = enumerate_stable(hard + soft, gp.signature, **caps)
    if not models:
        models = sm_set(gp, **caps)
    if not models:
        raise InconsistentProgram("the program has no stable models")
    return _weigh(gp, models)


def _order(entries) -> list:
    return sorted(entries, key=lambda e: (-e.probability, model_key(e.model)))


def probability_table(gp: GroundProgram, **caps) -> ModelTable:
    weighted = candidates(gp, **caps)
    k_max = max(w.hard for _, w in weighted)
    top = [w.soft for _, w in weighted if w.hard == k_max]
    shift = max(top)
    z = math.fsum(math.exp(s - shift) for s in top)
    entries = [Entry(m, w, math.exp(w.soft - shift) / z if w.hard == k_max else 0.0)
               for m, w in weighted]
    return ModelTable(tuple(_order(entries)), k_max)


def map_models(gp: GroundProgram, eps: float = EPS, **caps) -> list:
    """Most probable stable models (ties within eps on the soft sum)."""
    weighted = candidates(gp, **caps)
    k_max = max(w.hard for _, w in weighted)
    best = max(w.soft for _, w in weighted if w.hard == k_max)
    return [m for m, w in weighted if w.hard == k_max and w.soft >= best - eps]


def marginal(gp: GroundProgram, query: Formula, **caps) -> float:
    table = probability_table(gp, **caps)
    return math.fsum(e.probability for e in table.entries if satisfies(e.model, query))
