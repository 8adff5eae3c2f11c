import pytest
from hypothesis import given
from hypothesis import strategies as st

from choicestruct.choice import TableChoice, all_menus
from choicestruct.errors import CapExceededError, NormalizationRequired, RelationError
from choicestruct.pref import (
    Poset,
    Preorder,
    antichain,
    enumerate_posets,
    enumerate_preorders,
    is_poset_rationalizable,
    maximal_subset_formula,
    maximize,
    maximize_as_choicefn,
    normalize_preorder,
    poset_from_pairs,
    prel_map,
    prel_preorder,
    preorder_from_pairs,
)
from choicestruct.structure import Player

from .strategies import posets

CARRIER = ("a", "b", "c", "d")


def test_closure_makes_a_poset():
    p = poset_from_pairs("abc", [("a", "b"), ("b", "c")])
    assert p.leq("a", "c")
    assert p.less("a", "c")
    assert not p.leq("c", "a")


def test_validation():
    with pytest.raises(RelationError):
        Preorder(("a", "b"), frozenset({("a", "a")}))
    with pytest.raises(RelationError):
        Preorder(("a", "b"), frozenset({("a", "a"), ("b", "b"), ("a", "z")}))
    with pytest.raises(RelationError):
        poset_from_pairs("ab", [("a", "b"), ("b", "a")])
    assert not preorder_from_pairs("ab", [("a", "b"), ("b", "a")]).is_antisymmetric


def test_equality_ignores_carrier_order():
    assert poset_from_pairs("ab", [("a", "b")]) == poset_from_pairs("ba", [("a", "b")])


@pytest.mark.parametrize("n, count", [(0, 1), (1, 1), (2, 3), (3, 19), (4, 219)])
def test_poset_counts(n, count):
    found = list(enumerate_posets(CARRIER[:n]))
    assert len(found) == count
    assert len(set(found)) == count


def test_poset_count_on_five_points():
    assert sum(1 for _ in enumerate_posets("abcde")) == 4231


@pytest.mark.parametrize("n, count", [(1, 1), (2, 4), (3, 29), (4, 355)])
def test_preorder_counts(n, count):
    found = set(enumerate_preorders(CARRIER[:n]))
    assert len(found) == count


def test_maximize_keeps_ties():
    q = preorder_from_pairs("abc", [("a", "b"), ("b", "a"), ("c", "a")])
    assert maximize(q, "abc") == {"a", "b"}
    assert maximize(antichain("abc"), "ab") == {"a", "b"}
    with pytest.raises(RelationError):
        maximize(q, "az")


def test_prel_along_non_injective_map_needs_normalization():
    p = poset_from_pairs(("lo", "hi"), [("lo", "hi")])
    f = {"x": "lo", "y": "lo", "z": "hi"}
    q = prel_preorder(p, f)
    assert q.leq("x", "y") and q.leq("y", "x")
    with pytest.raises(NormalizationRequired):
        prel_map(p, f)
    n = normalize_preorder(q)
    assert isinstance(n, Poset)
    assert not n.leq("x", "y")
    for k in all_menus("xyz"):
        assert maximize(n, k) == maximize(q, k)


def test_prel_needs_carrier_for_plain_function():
    with pytest.raises(RelationError):
        prel_preorder(antichain("a"), lambda x: x)


@given(posets(CARRIER), st.sets(st.sampled_from(CARRIER), min_size=1), st.sets(st.sampled_from(CARRIER)))
def test_maximal_subset_formula_matches_maximize(p, k, l):
    l = l & k
    assert maximal_subset_formula(p, k, l) == (maximize(p, k) <= l)


@given(posets(CARRIER[:3]))
def test_oracle_recovers_poset(p):
    assert is_poset_rationalizable(maximize_as_choicefn(p), CARRIER[:3]) == p


def test_oracle_rejects_regret_table(example, acts_i):
    c = example.theta(Player.I)["t_i"]
    assert is_poset_rationalizable(c, tuple(acts_i.values())) is None


def test_oracle_rejects_empty_choice():
    c = TableChoice({("a", "b"): ()})
    assert is_poset_rationalizable(c, "ab") is None


def test_oracle_cap():
    with pytest.raises(CapExceededError):
        is_poset_rationalizable(TableChoice({}), "abcdef")
