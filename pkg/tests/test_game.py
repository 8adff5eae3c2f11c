from fractions import Fraction

import pytest

from choicestruct.criteria import interval_belief, point_belief
from choicestruct.errors import BeliefError, SpaceError
from choicestruct.game import (
    BeliefFamily,
    Criterion,
    FamilyKind,
    GameSpec,
    action_acts,
    dominating_mixtures,
    example_game,
    justifiable,
    outcome_set,
    rationalize,
)


def test_game_validation():
    with pytest.raises(SpaceError):
        GameSpec(("i", "i"), (("a",), ("b",)), {("a", "b"): (0, 0)})
    with pytest.raises(SpaceError):
        GameSpec(("i", "j"), (("a",), ("b", "c")), {("a", "b"): (0, 0)})


def test_outcomes_are_payoff_pairs():
    g = example_game()
    z = outcome_set(g)
    assert "(5,1)" in z
    assert len(z) == 8
    assert [f.name for f in action_acts(g, 1)] == ["f_l", "f_r"]


@pytest.mark.parametrize("kind, n, count", [
    ("grid_points", 2, 3),
    ("grid_points", 8, 9),
    ("full_simplex", 8, 1),
    ("grid_intervals", 2, 3),
    ("grid_hulls", 2, 4),
])
def test_family_sizes(kind, n, count):
    assert sum(1 for _ in BeliefFamily(FamilyKind(kind), n).generate(("l", "r"))) == count


def test_family_validation():
    with pytest.raises(BeliefError):
        BeliefFamily(FamilyKind.GRID_POINTS, 0)


def test_justifiable_returns_witness():
    g = example_game("regret", 8)
    families = g.criteria[0].families
    w = justifiable(g, 0, "m", ("l", "r"), families)
    assert w is not None
    assert justifiable(g, 0, "m", ("l", "r"), [BeliefFamily(FamilyKind.GRID_POINTS, 8)]) is None
    assert justifiable(g, 0, "u", ("l",), families, Criterion.EU) is not None
    with pytest.raises(SpaceError):
        justifiable(g, 0, "zz", ("l",), families)


def test_justification_menu_is_own_survivors():
    g = example_game("regret")
    grid = [BeliefFamily(FamilyKind.GRID_POINTS, 8)]
    assert justifiable(g, 0, "m", ("l", "r"), grid) is None
    w = justifiable(g, 0, "m", ("l", "r"), grid, own_survivors=("u", "m"))
    assert w == point_belief(("l", "r"), {"r": 1})
    with pytest.raises(SpaceError):
        justifiable(g, 0, "d", ("l", "r"), grid, own_survivors=("u", "m"))


@pytest.mark.parametrize("name, line, rounds", [
    ("eu", "i: u | j: l", 4),
    ("maxmin", "i: u,c,d | j: l,r", 2),
    ("regret", "i: u | j: l", 4),
])
def test_rationalize_fixture_games(games, name, line, rounds):
    r = rationalize(games[name])
    assert r.survivors_line() == line
    assert len(r.rounds) == rounds
    assert not any(r.rounds[-1].deleted)


@pytest.mark.parametrize("grid", [4, 8, 16])
def test_eu_survivors_do_not_depend_on_grid(grid):
    assert rationalize(example_game("eu", grid=grid)).survivors_line() == "i: u | j: l"


@pytest.mark.parametrize("criterion", ["eu", "maxmin", "regret"])
def test_larger_family_never_shrinks_justifiable_set(criterion):
    g = example_game(criterion)
    small = [BeliefFamily(FamilyKind.GRID_POINTS, 4)]
    large = small + [BeliefFamily(FamilyKind.FULL_SIMPLEX), BeliefFamily(FamilyKind.GRID_INTERVALS, 4)]
    for p, survivors in ((0, ("l", "r")), (1, ("u", "m", "c", "d"))):
        for a in g.actions[p]:
            if justifiable(g, p, a, survivors, small) is not None:
                assert justifiable(g, p, a, survivors, large) is not None


def test_rationalize_needs_criteria():
    with pytest.raises(BeliefError):
        rationalize(example_game())


def test_regret_interval_justifies_m():
    g = example_game("regret")
    w = justifiable(g, 0, "m", ("l", "r"), [BeliefFamily(FamilyKind.GRID_INTERVALS, 4)])
    assert w == interval_belief(("l", "r"), 0, 1)


def test_dominating_mixtures():
    g = example_game()
    m = dominating_mixtures(g, 0, "m", "u", "c")
    assert str(m) == "(1/2, 1)"
    assert Fraction(3, 4) in m
    assert Fraction(1, 2) not in m
    assert str(dominating_mixtures(g, 0, "d", "u", "c")) == "(0, 1/3)"
    assert dominating_mixtures(g, 0, "u", "m", "c") is None
