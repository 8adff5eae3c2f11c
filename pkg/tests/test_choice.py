import random

import pytest

from choicestruct.act import Act, pullback
from choicestruct.choice import (
    ChoiceEvent,
    RuleChoice,
    TableChoice,
    colimit_choice,
    enumerate_choice_fns,
    first_disagreement,
    gamma_map,
    iia_violations,
    in_event,
    lift_along_injection,
    menu_label,
    override,
    pushforward_event,
    random_choice_fn,
    relabel,
    sample_menus,
)
from choicestruct.errors import (
    CapExceededError,
    CompatibilityError,
    ContractionError,
    MenuOutsideUniverseError,
    NotInjectiveError,
)
from choicestruct.space import MeasurableMap, discrete_space
from choicestruct.structure import Player


def test_empty_menu_chooses_nothing():
    c = TableChoice({})
    assert c.evaluate([]) == frozenset()
    assert c.evaluate(["a"]) == {"a"}


def test_table_contraction_enforced():
    with pytest.raises(ContractionError):
        TableChoice({("a", "b"): ("c",)})
    with pytest.raises(ContractionError):
        TableChoice({("a",): ()})


def test_table_outside_universe():
    c = TableChoice({("a", "b"): ("a",)})
    with pytest.raises(MenuOutsideUniverseError):
        c.evaluate({"a", "c"})


def test_rule_choice_equality_by_key():
    a = RuleChoice(lambda k: k, key=("all",))
    b = RuleChoice(lambda k: set(), key=("all",))
    assert a == b
    assert RuleChoice(lambda k: k) != RuleChoice(lambda k: k)


def test_rule_contraction_checked_on_evaluation():
    bad = RuleChoice(lambda k: {"zz"})
    with pytest.raises(ContractionError):
        bad.evaluate({"a", "b"})


def test_event_membership():
    c = TableChoice({("a", "b"): ("a",)})
    assert in_event(c, ChoiceEvent({"a", "b"}, {"a"}))
    assert not in_event(c, ChoiceEvent({"a", "b"}, {"b"}))
    with pytest.raises(ContractionError):
        ChoiceEvent({"a"}, {"b"})


def test_relabel_along_projection():
    # x1, x2 both map to y; choice over {y, w}
    c = TableChoice({("y", "w"): ("y",)})
    f = {"x1": "y", "x2": "y", "x3": "w"}
    d = relabel(c, f)
    assert d.evaluate({"x1", "x2", "x3"}) == {"x1", "x2"}
    assert d.evaluate({"x1", "x2"}) == {"x1", "x2"}


def test_gamma_map_judges_pullbacks():
    x = discrete_space(("s1", "s2"), "X")
    y = discrete_space(("y",), "Y")
    phi = MeasurableMap(x, y, {"s1": "y", "s2": "y"})
    f, g = Act(y, ("good",), "f"), Act(y, ("bad",), "g")
    c = TableChoice({(pullback(f, phi), pullback(g, phi)): (pullback(f, phi),)})
    d = gamma_map(c, phi)
    assert d.evaluate({f, g}) == {f}
    assert gamma_map(c, phi) == d


def test_lift_round_trip_and_empty_choice():
    c = TableChoice({("a", "b"): ("b",)})
    f = {"a": 1, "b": 2}
    lifted = lift_along_injection(c, f)
    assert lifted.evaluate({1, 2, 3}) == {2}
    assert lifted.evaluate({3}) == frozenset()
    assert first_disagreement(relabel(lifted, f), c, [{"a"}, {"b"}, {"a", "b"}]) is None


def test_lift_requires_injection():
    with pytest.raises(NotInjectiveError):
        lift_along_injection(TableChoice({}), {"a": 1, "b": 1})


def test_pushforward_event_preimage():
    f = {"x1": "y", "x2": "y", "x3": "w"}
    e = ChoiceEvent({"x1", "x2", "x3"}, {"x1", "x2"})
    pushed = pushforward_event(e, f)
    assert pushed.K == {"y", "w"}
    assert pushed.L == {"y"}
    c = TableChoice({("y", "w"): ("y",)})
    assert in_event(relabel(c, f), e) == in_event(c, pushed)


def test_enumerate_choice_fns_counts():
    # menus of size 2 (three of them, 4 answers each) and one of size 3 (8 answers)
    assert sum(1 for _ in enumerate_choice_fns(("a", "b", "c"))) == 4**3 * 8
    with pytest.raises(CapExceededError):
        list(enumerate_choice_fns(("a", "b", "c", "d"), cap=1000))


def test_random_choice_fn_nonempty_option():
    c = random_choice_fn(("a", "b", "c"), random.Random(1), allow_empty=False)
    assert all(c.evaluate(m) for m in c.menus)


def test_sample_menus_deterministic():
    assert sample_menus(range(8), 10, 3, random.Random(0)) == sample_menus(range(8), 10, 3, random.Random(0))


def test_iia_violation_in_regret_table(example, acts_i):
    # m is chosen from {u,m,c,d} but not from {u,m}
    c = example.theta(Player.I)["t_i"]
    names = ("f_u", "f_m", "f_c", "f_d")
    menus = [frozenset({acts_i["f_u"], acts_i["f_m"]}), frozenset(acts_i[n] for n in names)]
    found = iia_violations(c, menus)
    assert any(v.kind == "contraction" and v.items == (acts_i["f_m"],) for v in found)


def test_override_changes_one_menu():
    c = TableChoice({("a", "b"): ("a",), ("a", "c"): ("c",)})
    d = override(c, {"a", "b"}, {"b"})
    assert d.evaluate({"a", "b"}) == {"b"}
    assert d.evaluate({"a", "c"}) == {"c"}


def test_colimit_choice_restricts_to_levels():
    levels = [("a",), ("b", "c")]
    maps = [{"a": "c"}]
    top = TableChoice({("b", "c"): ("b",)})
    family = [relabel(top, maps[0]), top]
    mu = colimit_choice(levels, maps, family)
    assert mu.evaluate({"b", "c"}) == {"b"}
    assert first_disagreement(relabel(mu, {"a": "c"}), family[0], [{"a"}]) is None


def test_colimit_choice_incompatible_family():
    levels = [("a",), ("b", "c")]
    maps = [{"a": "c"}]
    bad = RuleChoice(lambda k: frozenset(), normal=False)
    with pytest.raises(CompatibilityError):
        colimit_choice(levels, maps, [bad, TableChoice({("b", "c"): ("b",)})])


def test_menu_label_uses_reference_order():
    assert menu_label({"c", "a"}, ("c", "b", "a")) == "{c,a}"
