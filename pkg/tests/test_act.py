import random

import pytest

from choicestruct.act import (
    Act,
    OutcomeSet,
    act_label,
    auto_witnesses,
    constant_act,
    descend_level,
    enumerate_acts,
    factor_through,
    pullback,
    restrict,
    sample_acts,
)
from choicestruct.errors import CapExceededError, MeasurabilityError, SpaceError, WitnessError
from choicestruct.space import FinCochain, MeasurableMap, cochain_limit, discrete_space, space_from_blocks


def test_outcome_set_utilities():
    z = OutcomeSet(("x", "y"), ((1, 0), ("1/2", 3)))
    assert z.players == 2
    assert z.utility(0, "y") == z.utility(0, "x") / 2
    with pytest.raises(SpaceError):
        OutcomeSet(("x", "x"))


def test_act_must_be_measurable():
    x = space_from_blocks([("a", "b")])
    with pytest.raises(MeasurabilityError):
        Act(x, ("z1", "z2"))


def test_act_equality_ignores_name():
    x = discrete_space(("a", "b"))
    assert Act(x, ("z", "w"), "f") == Act(x, ("z", "w"))
    assert act_label(Act(x, ("z", "w"))) == "{a:z, b:w}"
    assert act_label(constant_act(x, "z", "k")) == "k"


def test_pullback_along_projection():
    x = discrete_space(("a", "b"))
    y = discrete_space(("l", "r"))
    phi = MeasurableMap(x, y, {"a": "r", "b": "r"})
    f = Act(y, ("z1", "z2"), "f")
    g = pullback(f, phi)
    assert g.table == ("z2", "z2")
    assert g.name == "f"


def test_restrict_to_subspace():
    x = discrete_space(("a", "b", "c"))
    f = Act(x, (1, 2, 3))
    assert restrict(f, discrete_space(("c", "a"))).table == (3, 1)


def test_enumerate_acts_counts_atoms():
    x = space_from_blocks([("a", "b"), ("c",)])
    acts = enumerate_acts(x, ("z", "w"))
    assert len(acts) == 4
    assert all(f("a") == f("b") for f in acts)
    with pytest.raises(CapExceededError):
        enumerate_acts(discrete_space(range(6)), ("z", "w"), cap=10)


def test_sample_acts_is_seeded():
    x = discrete_space(range(4))
    one = sample_acts(x, "abc", 10, random.Random(3))
    two = sample_acts(x, "abc", 10, random.Random(3))
    assert one == two


def test_factor_through_quotient():
    x = discrete_space(("a1", "a2", "b"))
    y = discrete_space(("A", "B"))
    phi = MeasurableMap(x, y, {"a1": "A", "a2": "A", "b": "B"})
    f = Act(x, ("z", "z", "w"), "f")
    g = factor_through(f, phi, auto_witnesses(f, phi))
    assert g.table == ("z", "w")
    assert pullback(g, phi).table == f.table


def test_factor_through_rejects_split_fiber():
    x = discrete_space(("a1", "a2"))
    y = discrete_space(("A",))
    phi = MeasurableMap(x, y, {"a1": "A", "a2": "A"})
    f = Act(x, ("z", "w"))
    with pytest.raises(WitnessError):
        factor_through(f, phi, auto_witnesses(f, phi))


def test_factor_through_outside_image_uses_default():
    x = discrete_space(("a",))
    y = discrete_space(("A", "B"))
    phi = MeasurableMap(x, y, {"a": "A"})
    f = Act(x, ("z",))
    g = factor_through(f, phi, {"z": {"A"}}, OutcomeSet(("w", "z")))
    assert g.table == ("z", "w")
    with pytest.raises(SpaceError):
        factor_through(f, phi, {"z": {"A"}})


def test_factor_through_default_is_first_outcome_of_z():
    x = discrete_space(("a",))
    y = discrete_space(("A", "B", "C"))
    phi = MeasurableMap(x, y, {"a": "B"})
    f = Act(x, ("y",))
    g = factor_through(f, phi, auto_witnesses(f, phi), OutcomeSet(("x", "y", "z")))
    assert g.table == ("x", "y", "x")


def test_descend_level_finds_least_level():
    x0 = discrete_space(("p",))
    x1 = discrete_space(("p1", "p2"))
    lim = cochain_limit(FinCochain((x0, x1), (MeasurableMap(x1, x0, {"p1": "p", "p2": "p"}),)))
    constant = Act(lim.space, ("z", "z"))
    assert descend_level(constant, lim).level == 0
    varying = Act(lim.space, tuple("zw"))
    found = descend_level(varying, lim)
    assert found.level == 1
    assert pullback(found.act, lim.projections[1]).table == varying.table
