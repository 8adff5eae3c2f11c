"""Hypothesis strategies for small spaces, maps, choice functions and posets."""
from __future__ import annotations

import hypothesis.strategies as st

from choicestruct.act import Act, enumerate_acts
from choicestruct.choice import TableChoice, all_menus, ordered
from choicestruct.pref import poset_from_pairs
from choicestruct.space import FinSpace, MeasurableMap, discrete_space, space_from_blocks

OUTCOMES = ("a", "b", "c")


def discrete_spaces(tag: str, min_size: int = 1, max_size: int = 3):
    return st.integers(min_size, max_size).map(
        lambda n: discrete_space(tuple(f"{tag}{k}" for k in range(n)), tag.upper())
    )


@st.composite
def partitioned_spaces(draw, tag: str = "s", max_size: int = 4) -> FinSpace:
    n = draw(st.integers(1, max_size))
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    blocks: dict[int, list] = {}
    for k, lbl in enumerate(labels):
        blocks.setdefault(lbl, []).append(f"{tag}{k}")
    return space_from_blocks(list(blocks.values()), tag.upper())


@st.composite
def maps(draw, x: FinSpace, y: FinSpace) -> MeasurableMap:
    return MeasurableMap(x, y, {p: draw(st.sampled_from(y.points)) for p in x.points})


@st.composite
def acts(draw, space: FinSpace, outcomes=OUTCOMES) -> Act:
    per_atom = [draw(st.sampled_from(outcomes)) for _ in space.atoms]
    return Act(space, tuple(per_atom[space.atom_index[p]] for p in space.points))


@st.composite
def choice_fns(draw, items, allow_empty: bool = True) -> TableChoice:
    table = {}
    for m in all_menus(items, min_size=2):
        k = ordered(m, items)
        picked = draw(st.lists(st.sampled_from(k), unique=True, min_size=0 if allow_empty else 1, max_size=len(k)))
        table[m] = frozenset(picked)
    return TableChoice(table)


@st.composite
def act_choice_fns(draw, space: FinSpace, outcomes=("a", "b")):
    return draw(choice_fns(enumerate_acts(space, outcomes)))


@st.composite
def posets(draw, carrier):
    order = draw(st.permutations(list(carrier)))
    edges = [
        (a, b)
        for i, a in enumerate(order)
        for b in order[i + 1:]
        if draw(st.booleans())
    ]
    return poset_from_pairs(carrier, edges)


@st.composite
def surjections(draw, y: FinSpace, tag: str = "x", extra: int = 2) -> MeasurableMap:
    """A map onto y from a discrete space whose first |y| points cover y."""
    n = len(y.points) + draw(st.integers(0, extra))
    x = discrete_space(tuple(f"{tag}{k}" for k in range(n)), tag.upper())
    targets = list(y.points) + [draw(st.sampled_from(y.points)) for _ in range(n - len(y.points))]
    return MeasurableMap(x, y, dict(zip(x.points, targets)))


@st.composite
def injections(draw, x: FinSpace, tag: str = "y", extra: int = 2) -> MeasurableMap:
    """x into a discrete space with up to `extra` points outside the image."""
    n = len(x.points) + draw(st.integers(0, extra))
    y = discrete_space(tuple(f"{tag}{k}" for k in range(n)), tag.upper())
    targets = draw(st.permutations(y.points))
    return MeasurableMap(x, y, dict(zip(x.points, targets)))
