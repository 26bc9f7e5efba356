import math

import pytest

from lpmlnkit.core import HARD, Atom, Soft, WeightedFormula
from lpmlnkit.errors import RuleFormError, TranslationError
from lpmlnkit.grounder import make_ground
from lpmlnkit.lpmln import map_models, sm_set
from lpmlnkit.oracle import brute_optimal
from lpmlnkit.stable import enumerate_stable, optimal_models, penalty
from lpmlnkit.syntax import parse_formula
from lpmlnkit.translate import (
    emit_aspcore2, format_wc, lpmln2wc, lpmln2wc_pnt, lpmln2wc_pnt_rule, lpmln2wc_rule_clingo,
    mln2wc, round_half_away,
)

from conftest import atoms, gp_of

PQR = "10 :: p -> q.\n1 :: p -> r.\n5 :: p.\n-20 :: not r -> bot.\n"
BIRD = """
alpha :: bird(jo) :- residentBird(jo).
alpha :: bird(jo) :- migratoryBird(jo).
alpha :: :- residentBird(jo), migratoryBird(jo).
2 :: residentBird(jo).
1 :: migratoryBird(jo).
"""


def _weak(t):
    return [(w.formula, w.weight, w.level) for w in t.wc.weak]


def test_reward_translation_penalties():
    t = lpmln2wc(gp_of(PQR))
    assert [w.weight for w in t.wc.weak] == [-10, -1, -5, 20]
    assert penalty(t.wc, atoms("p", "q"), 0) == -15
    assert penalty(t.wc, atoms("p", "q", "r"), 0) == 4


@pytest.mark.parametrize("translate", [lpmln2wc, lpmln2wc_pnt, lpmln2wc_pnt_rule,
                                       lpmln2wc_rule_clingo])
def test_every_translation_finds_the_most_probable_model(translate):
    t = translate(gp_of(PQR))
    best = {t.restrict(m) for m in optimal_models(t.wc)}
    assert best == {atoms("p", "q")}


def test_unsat_atoms_follow_violations():
    gp = gp_of(PQR)
    t = lpmln2wc_pnt_rule(gp)
    got = set(enumerate_stable(t.wc.base, t.wc.signature()))
    assert got == {t.phi(m) for m in sm_set(gp)}
    assert t.phi(atoms("p")) == atoms("p", "unsat(1)", "unsat(2)", "unsat(4)")


def test_clingo_text_for_pqr():
    text = emit_aspcore2(lpmln2wc_rule_clingo(gp_of(PQR), simplify_constraints=True))
    assert text.splitlines() == [
        "% weights scaled by 1000, rounded half away from zero",
        "unsat(1) :- p, not q.",
        "q :- p, not unsat(1).",
        "unsat(2) :- p, not r.",
        "r :- p, not unsat(2).",
        "unsat(3) :- not p.",
        "p :- not unsat(3).",
        ":~ unsat(1). [10000@0, 1]",
        ":~ unsat(2). [1000@0, 2]",
        ":~ unsat(3). [5000@0, 3]",
        ":~ not r. [-20000@0, 4]",
    ]


def test_strict_hard_keeps_hard_rules_as_rules():
    t = lpmln2wc(gp_of(BIRD), strict_hard=True)
    assert format_wc(t).splitlines() == [
        "bird(jo) :- residentBird(jo).",
        "bird(jo) :- migratoryBird(jo).",
        ":- residentBird(jo), migratoryBird(jo).",
        "residentBird(jo) ; not residentBird(jo).",
        "migratoryBird(jo) ; not migratoryBird(jo).",
        ":~ residentBird(jo). [-2@0]",
        ":~ migratoryBird(jo). [-1@0]",
    ]


def test_hard_rules_get_level_one():
    t = lpmln2wc(gp_of(BIRD))
    assert [(w.weight, w.level) for w in t.wc.weak] == [(-1, 1)] * 3 + [(-2, 0), (-1, 0)]


def test_rule_form_is_required_for_clingo():
    gp = gp_of("1 :: p.\n2 :: (p -> q) | r.\n")
    with pytest.raises(RuleFormError, match="rule 2"):
        lpmln2wc_rule_clingo(gp)


def test_strict_hard_rewrites_nested_hard_formulas():
    gp = gp_of("alpha :: p & q | r.\n1 :: p.\n")
    t = lpmln2wc_rule_clingo(gp, strict_hard=True)
    best = {t.restrict(m) for m in optimal_models(t.wc)}
    assert best == set(map_models(gp))
    emit_aspcore2(t)


def test_reserved_predicate():
    with pytest.raises(TranslationError):
        lpmln2wc_pnt_rule(gp_of("1 :: unsat(1).\n"))


def test_mln_translation_frees_every_atom():
    gp = gp_of("1 :: p -> q.\n2 :: p.\n")
    t = mln2wc(gp)
    assert len(enumerate_stable(t.wc.base, t.wc.signature())) == 4
    assert set(optimal_models(t.wc)) == {atoms("p", "q")}


def test_optimal_models_agree_with_oracle_on_translation():
    t = lpmln2wc(gp_of(BIRD))
    assert set(optimal_models(t.wc)) == brute_optimal(t.wc.base, _weak(t))


@pytest.mark.parametrize("x, expected", [(0.5, 1), (-0.5, -1), (1.49, 1), (-2.5, -3), (0.0, 0)])
def test_round_half_away_from_zero(x, expected):
    assert round_half_away(x) == expected


def test_scaling_and_overflow():
    gp = make_ground([WeightedFormula(1, Soft(0.0015), parse_formula("p"))])
    assert ":~ unsat(1). [2@0, 1]" in emit_aspcore2(lpmln2wc_rule_clingo(gp))
    big = make_ground([WeightedFormula(1, Soft(3e6), parse_formula("p"))])
    with pytest.raises(TranslationError):
        emit_aspcore2(lpmln2wc_rule_clingo(big))


def test_hard_weight_is_the_scale():
    gp = make_ground([WeightedFormula(1, HARD, Atom("p"))])
    assert ":~ unsat(1). [1000@1, 1]" in emit_aspcore2(lpmln2wc_rule_clingo(gp))
    assert ":~ unsat(1). [7@1, 1]" in emit_aspcore2(lpmln2wc_rule_clingo(gp), scale=7)


def test_rationals_are_quoted_in_asp():
    gp = make_ground([WeightedFormula(1, Soft(1), parse_formula("rem(1/2)"))])
    assert 'rem("1/2") :- not unsat(1).' in emit_aspcore2(lpmln2wc_rule_clingo(gp))


def test_reward_translation_text():
    lines = format_wc(lpmln2wc(gp_of(PQR))).splitlines()
    assert lines[4:] == [":~ p -> q. [-10@0]", ":~ p -> r. [-1@0]", ":~ p. [-5@0]",
                         ":~ not r -> bot. [20@0]"]


def test_empty_program_translates_to_nothing():
    t = lpmln2wc(gp_of(""))
    assert t.wc.base == () and t.wc.weak == ()
    assert lpmln2wc_pnt_rule(gp_of("")).wc.base == ()


def test_penalty_translation_weights():
    t = lpmln2wc_pnt(gp_of("10 :: p -> q.\nalpha :: p.\n"))
    assert format_wc(t).splitlines()[2:] == [":~ not (p -> q). [10@0]", ":~ not p. [1@1]"]
    assert set(optimal_models(lpmln2wc_pnt(gp_of(PQR)).wc)) == {atoms("p", "q")}


def test_simplified_rule_translation_phi():
    t = lpmln2wc_rule_clingo(gp_of(PQR), simplify_constraints=True)
    assert t.phi(atoms("p", "q")) == atoms("p", "q", "unsat(2)")


def test_single_rule_clingo_translation():
    t = lpmln2wc_rule_clingo(gp_of("10 :: q :- p."))
    assert format_wc(t).splitlines() == ["unsat(1) :- p, not q.", "q :- p, not unsat(1).",
                                         ":~ unsat(1). [10@0]"]
    hard = lpmln2wc_rule_clingo(gp_of("alpha :: q :- p."))
    assert [(w.weight, w.level) for w in hard.wc.weak] == [(1, 1)]


def test_mln_translation_shape():
    t = mln2wc(gp_of("1 :: p -> q."))
    assert format_wc(t).splitlines() == ["(p -> q) ; (not (p -> q)).", "p ; not p.", "q ; not q.",
                                         ":~ p -> q. [-1@0]"]
    empty = make_ground([], [Atom("p")])
    assert set(optimal_models(mln2wc(empty).wc)) == {atoms(), atoms("p")}


def test_log_weights_scale():
    gp = make_ground([WeightedFormula(1, Soft(math.log(0.3)), parse_formula("p"))])
    assert ":~ unsat(1). [-1204@0, 1]" in emit_aspcore2(lpmln2wc_rule_clingo(gp))
