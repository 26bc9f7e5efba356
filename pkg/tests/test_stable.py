import pytest
from hypothesis import given, settings, strategies as st

from lpmlnkit.core import BOT, Atom, Implies, Not, Or, choice
from lpmlnkit.errors import CapExceeded
from lpmlnkit.oracle import GeneratorConfig, brute_optimal, brute_stable, gen_program
from lpmlnkit.stable import (
    WcProgram, WeakConstraint, dominated, enumerate_stable, is_stable, is_stable_relative, optimal_models,
    penalty, reduct, satisfies, to_rules,
)
from lpmlnkit.syntax import parse_formula
from lpmlnkit.translate import lpmln2wc

from conftest import atoms, gp_of

p, q, r = Atom("p"), Atom("q"), Atom("r")


def test_reduct_replaces_false_subformulas():
    i = atoms("p")
    assert reduct(Or(p, q), i) == Or(p, BOT)
    assert reduct(Not(q), i) == Implies(BOT, BOT)
    assert reduct(q, i) == BOT


def test_satisfies_and_stability():
    assert satisfies(atoms("p"), parse_formula("p & not q"))
    assert is_stable([Implies(Not(q), p)], atoms("p"))
    assert not is_stable([Implies(q, p), Or(q, Not(q))], atoms("p"))


def test_relative_stability_ignores_atoms_outside_sigma():
    f = [Implies(q, p)]
    assert not is_stable(f, atoms("p", "q"))
    assert is_stable_relative(f, atoms("p", "q"), {p})


def test_to_rules_handles_choices_and_nesting():
    rules = to_rules([choice(p), Implies(p, Or(q, Not(r)))])
    assert rules is not None
    assert all(all(isinstance(a, Atom) for a in rule.head) for rule in rules)


def test_nested_implication_in_body_is_not_rule_shaped():
    assert to_rules([Implies(Implies(p, q), r)]) is None


@pytest.mark.parametrize("strategy", ["auto", "split", "fallback"])
def test_even_loop(strategy):
    f = [Implies(Not(q), p), Implies(Not(p), q)]
    assert set(enumerate_stable(f, strategy=strategy)) == {atoms("p"), atoms("q")}


def test_positive_loop_needs_support():
    f = [Implies(p, q), Implies(q, p), choice(r)]
    assert set(enumerate_stable(f, {p, q, r})) == {atoms(), atoms("r")}


def test_models_are_canonically_ordered():
    f = [choice(p), choice(q)]
    assert enumerate_stable(f) == [atoms(), atoms("p"), atoms("q"), atoms("p", "q")]


def test_fallback_cap():
    many = [choice(Atom(f"a{k}")) for k in range(5)]
    with pytest.raises(CapExceeded):
        enumerate_stable(many, strategy="fallback", max_atoms=4)


def test_component_cap():
    ring = [Implies(Not(Atom(f"a{(k + 1) % 4}")), Atom(f"a{k}")) for k in range(4)]
    with pytest.raises(CapExceeded):
        enumerate_stable(ring, strategy="split", max_component=3)


def test_splitting_scales_past_the_fallback_cap():
    chain = [choice(Atom(f"a{k}")) for k in range(30)]
    chain.append(Implies(Atom("a0"), Atom("b")))
    models = enumerate_stable(chain[:12] + chain[-1:])
    assert len(models) == 2 ** 12


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_engine_matches_oracle(seed, rule_form):
    gp = gen_program(GeneratorConfig(atoms=4, rules=5, rule_form=rule_form, seed=seed))
    formulas = [r.formula for r in gp.rules]
    assert set(enumerate_stable(formulas, gp.signature)) == brute_stable(formulas, gp.signature)


def test_weak_constraints_by_level():
    prog = WcProgram((choice(p), choice(q)),
                     (WeakConstraint(p, -2.0, 0), WeakConstraint(q, 1.0, 1), WeakConstraint(Not(p), 1.0, 0)))
    assert penalty(prog, atoms("p"), 0) == -2.0
    assert optimal_models(prog) == [atoms("p")]
    weak = [(w.formula, w.weight, w.level) for w in prog.weak]
    assert set(optimal_models(prog)) == brute_optimal(prog.base, weak)


def test_ties_are_all_optimal():
    prog = WcProgram((Or(p, q),), (WeakConstraint(p, 1.0, 0), WeakConstraint(q, 1.0, 0)))
    assert set(optimal_models(prog)) == {atoms("p"), atoms("q")}


def test_tolerance_merges_near_ties():
    prog = WcProgram((Or(p, q),), (WeakConstraint(p, 1.0, 0), WeakConstraint(q, 1.0 + 1e-12, 0)))
    assert len(optimal_models(prog)) == 2
    assert optimal_models(prog, eps=0.0) == [atoms("p")]


def test_reduct_examples():
    imp = Implies(p, q)
    assert reduct(imp, atoms("p", "q")) == imp
    assert reduct(imp, atoms("p")) == BOT
    assert reduct(choice(p), atoms("p")) == Or(p, BOT)
    nr = parse_formula("not r -> bot")
    red = reduct(nr, atoms("p", "q", "r"))
    for mask in range(8):
        j = frozenset(a for k, a in enumerate((p, q, r)) if mask >> k & 1)
        assert satisfies(j, red)


def test_relative_stability_examples():
    assert is_stable_relative([Or(p, q)], atoms("p"), {p, q})
    assert not is_stable_relative([Or(p, q)], atoms("p", "q"), {p, q})
    assert enumerate_stable([]) == [atoms()]
    assert enumerate_stable([p]) == [atoms("p")]


def test_dominance_examples():
    bird = gp_of("alpha :: bird(jo) :- residentBird(jo).\nalpha :: bird(jo) :- migratoryBird(jo).\n"
                 "alpha :: :- residentBird(jo), migratoryBird(jo).\n2 :: residentBird(jo).\n"
                 "1 :: migratoryBird(jo).\n")
    wc = lpmln2wc(bird).wc
    assert dominated(wc, atoms(), atoms("bird(jo)", "residentBird(jo)"))
    assert not dominated(wc, atoms(), atoms())
    ex1 = lpmln2wc(gp_of("10 :: p -> q.\n1 :: p -> r.\n5 :: p.\n-20 :: not r -> bot.\n")).wc
    assert dominated(ex1, atoms("p", "q", "r"), atoms("p", "q"))


def test_no_weak_constraints_keeps_every_model():
    prog = WcProgram((choice(p), choice(q)), ())
    assert len(optimal_models(prog)) == 4
    assert penalty(prog, atoms("p"), 0) == 0
