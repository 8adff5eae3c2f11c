from fractions import Fraction

import pytest

from choicestruct.criteria import (
    CredalSet,
    UtilityView,
    criterion_choice,
    eu_choice,
    expected_utility,
    full_simplex,
    interval_belief,
    lift_to_states,
    maxmin_choice,
    point_belief,
    regret_choice,
    worst_case_regret,
    worst_case_utility,
)
from choicestruct.errors import BeliefError
from choicestruct.game import action_acts, example_game, utility_view

SUPPORT = ("l", "r")


@pytest.fixture(scope="module")
def row():
    g = example_game()
    return {f.name: f for f in action_acts(g, 0)}, utility_view(g, 0)


def _pick(acts, *names):
    return frozenset(acts[n] for n in names)


def test_credal_set_validation():
    with pytest.raises(BeliefError):
        CredalSet(SUPPORT, ((Fraction(1, 2), Fraction(1, 3)),))
    with pytest.raises(BeliefError):
        CredalSet(SUPPORT, ())
    with pytest.raises(BeliefError):
        point_belief(SUPPORT, {"x": 1})
    with pytest.raises(BeliefError):
        interval_belief(SUPPORT, "3/4", "1/4")


def test_interval_collapses_to_point():
    assert interval_belief(SUPPORT, "1/2", "1/2").is_point
    assert len(interval_belief(SUPPORT, 0, 1).extreme_points) == 2


def test_utility_view_classes():
    u = UtilityView(0, (("a", 1), ("b", 2), ("c", 1)))
    assert u.classes() == ("a", "b")
    assert u("c") == 1


def test_expected_utility_at_even_prior(row):
    acts, u = row
    c = eu_choice(point_belief(SUPPORT, {"l": "1/2", "r": "1/2"}), u)
    assert c.evaluate(frozenset(acts.values())) == _pick(acts, "f_u")


def test_eu_rejects_sets():
    with pytest.raises(BeliefError):
        eu_choice(full_simplex(SUPPORT), UtilityView(0, ()))


def test_maxmin_over_full_simplex(row):
    acts, u = row
    c = maxmin_choice(full_simplex(SUPPORT), u)
    assert c.evaluate(frozenset(acts.values())) == _pick(acts, "f_c", "f_d")


def test_regret_menu_dependence(row):
    acts, u = row
    belief = interval_belief(SUPPORT, "1/4", 1)
    c = regret_choice(belief, u)
    full = frozenset(acts.values())
    assert c.evaluate(full) == _pick(acts, "f_u", "f_m", "f_c")
    assert c.evaluate(_pick(acts, "f_u", "f_m")) == _pick(acts, "f_u")
    assert c.evaluate(_pick(acts, "f_u", "f_c", "f_d")) == _pick(acts, "f_u", "f_c")
    assert worst_case_regret(acts["f_d"], _pick(acts, "f_u", "f_c", "f_d"), belief, u) == Fraction(13, 4)


def test_criteria_compare_by_parameters(row):
    _, u = row
    b = full_simplex(SUPPORT)
    assert criterion_choice("maxmin", b, u) == maxmin_choice(b, u)
    assert criterion_choice("regret", b, u) != maxmin_choice(b, u)
    with pytest.raises(BeliefError):
        criterion_choice("hurwicz", b, u)


def test_vacuous_extension_over_types():
    point = point_belief(SUPPORT, {"l": "1/2", "r": "1/2"})
    ext = point.extend_vacuous(("t1", "t2"))
    assert ext.support == (("l", "t1"), ("l", "t2"), ("r", "t1"), ("r", "t2"))
    assert len(ext.extreme_points) == 4
    assert len(full_simplex(SUPPORT).extend_vacuous(("t1", "t2")).extreme_points) == 4


def test_describe():
    assert interval_belief(SUPPORT, "1/4", 1).describe() == "hull[{l:3/4, r:1/4}; {r:1}]"


def test_uniform_extension_keeps_a_single_prior():
    ext = point_belief(SUPPORT, {"l": "1/2", "r": "1/2"}).extend_uniform(("t1", "t2"))
    assert ext.is_point
    assert ext.support == (("l", "t1"), ("l", "t2"), ("r", "t1"), ("r", "t2"))
    assert ext.extreme_points == ((Fraction(1, 4),) * 4,)
    assert len(interval_belief(SUPPORT, 0, 1).extend_uniform(("t1", "t2")).extreme_points) == 2


def test_lift_to_states_by_criterion():
    point = point_belief(SUPPORT, {"l": 1})
    assert lift_to_states("eu", point, ("t1", "t2")).is_point
    assert len(lift_to_states("maxmin", point, ("t1", "t2")).extreme_points) == 2
    assert len(lift_to_states("regret", point, ("t1", "t2")).extreme_points) == 2
    states = point_belief((("l", "t1"), ("r", "t2")), {("l", "t1"): 1})
    assert lift_to_states("regret", states, ("t1", "t2")) is states


@pytest.mark.parametrize("lo, hi", [("1/4", 1), (0, "1/2"), ("1/3", "2/3"), (0, 1)])
def test_maxmin_value_is_attained_at_vertices(row, lo, hi):
    acts, u = row
    lo, hi = Fraction(lo), Fraction(hi)
    belief = interval_belief(SUPPORT, lo, hi)
    grid = [lo + (hi - lo) * Fraction(k, 64) for k in range(65)]
    for f in acts.values():
        dense = min(expected_utility(f, (1 - p, p), SUPPORT, u) for p in grid)
        assert dense == worst_case_utility(f, belief, u)
