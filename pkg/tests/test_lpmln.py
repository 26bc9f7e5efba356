import math

import pytest
from hypothesis import given, settings, strategies as st

from lpmlnkit.grounder import ground
from lpmlnkit.lpmln import (
    WeightPair, map_models, marginal, probability_table, sm_set, weight,
)
from lpmlnkit.oracle import (
    GeneratorConfig, brute_map_lpmln, brute_probabilities, brute_sm, gen_program,
)
from lpmlnkit.plog import parse_plog, plog2lpmln
from lpmlnkit.syntax import parse_formula

from conftest import atoms, gp_of

PQR = "10 :: p -> q.\n1 :: p -> r.\n5 :: p.\n-20 :: not r -> bot.\n"
BIRD = """
alpha :: bird(jo) :- residentBird(jo).
alpha :: bird(jo) :- migratoryBird(jo).
alpha :: :- residentBird(jo), migratoryBird(jo).
2 :: residentBird(jo).
1 :: migratoryBird(jo).
"""


def test_pqr_weights():
    gp = gp_of(PQR)
    assert weight(gp, atoms("p", "q")) == WeightPair(0, 15)
    assert weight(gp, atoms("q")) is None
    soft = {frozenset(m): weight(gp, m).soft for m in sm_set(gp)}
    assert soft == {atoms(): 11, atoms("p"): 5, atoms("p", "q"): 15, atoms("p", "r"): -14,
                    atoms("p", "q", "r"): -4}


def test_probabilities_are_normalised_exponentials():
    table = probability_table(gp_of(PQR))
    z = sum(math.exp(s) for s in (11, 5, 15, -14, -4))
    assert table.probability(atoms("p", "q")) == pytest.approx(math.exp(15) / z, rel=1e-12)
    assert table.entries[0].model == atoms("p", "q")
    assert sum(e.probability for e in table.entries) == pytest.approx(1.0)


def test_hard_rules_restrict_mass():
    table = probability_table(gp_of(BIRD))
    assert table.k_max == 3
    assert {e.model for e in table.entries} == {
        atoms(), atoms("bird(jo)", "residentBird(jo)"), atoms("bird(jo)", "migratoryBird(jo)")}
    assert table.probability(atoms("bird(jo)", "residentBird(jo)")) == pytest.approx(
        math.e ** 2 / (1 + math.e + math.e ** 2))


def test_clashing_hard_rules_fall_back_to_all_candidates():
    gp = gp_of("alpha :: p.\nalpha :: :- p.\n1 :: q.\n")
    table = probability_table(gp)
    assert table.k_max == 1
    assert set(table.as_dict()) == set(brute_sm(gp))
    assert sum(table.as_dict().values()) == pytest.approx(1.0)


def test_map_and_marginal():
    gp = gp_of(PQR)
    assert map_models(gp) == [atoms("p", "q")]
    assert marginal(gp, parse_formula("q")) == pytest.approx(
        sum(math.exp(s) for s in (15, -4)) / sum(math.exp(s) for s in (11, 5, 15, -14, -4)))


def test_empty_program_has_the_empty_model():
    table = probability_table(gp_of(""))
    assert [(e.model, e.probability) for e in table.entries] == [(frozenset(), 1.0)]


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_table_matches_oracle(seed, rule_form):
    gp = gen_program(GeneratorConfig(atoms=4, rules=5, rule_form=rule_form, seed=seed))
    oracle = brute_probabilities(gp)
    table = probability_table(gp).as_dict()
    for m, pr in oracle.items():
        assert table.get(m, 0.0) == pytest.approx(pr, abs=1e-9)
    assert set(map_models(gp)) == brute_map_lpmln(gp)


def test_single_hard_fact_is_certain():
    table = probability_table(gp_of("alpha :: a."))
    assert table.as_dict() == {atoms("a"): 1.0}


def test_bird_weight_pair():
    assert weight(gp_of(BIRD), atoms("bird(jo)", "residentBird(jo)")) == WeightPair(3, 2)
    assert {atoms(), atoms("bird(jo)", "residentBird(jo)"),
            atoms("bird(jo)", "migratoryBird(jo)")} <= set(sm_set(gp_of(BIRD)))


def test_map_ties():
    assert set(map_models(gp_of("1 :: a.\n1 :: :- a.\n"))) == {atoms("a"), atoms()}


def test_marginal_extremes():
    gp = gp_of(PQR)
    assert marginal(gp, parse_formula("top")) == pytest.approx(1.0)
    assert marginal(gp, parse_formula("bot")) == 0.0


def test_monty_marginal(programs):
    gp = ground(plog2lpmln(parse_plog((programs / "monty.plog").read_text())))
    assert marginal(gp, parse_formula("eq_prize(4)")) == pytest.approx(5 / 13, abs=1e-9)
