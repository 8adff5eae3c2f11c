"""Preorders and posets on finite carriers, maximization, and the poset oracle."""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import networkx as nx

from .choice import ChoiceFn, RuleChoice, all_menus, item_label
from .errors import CapExceededError, NormalizationRequired, RelationError
from .space import MeasurableMap

log = logging.getLogger("choicestruct.pref")


@dataclass(frozen=True, eq=False)
class Preorder:
    carrier: tuple
    pairs: frozenset

    def __post_init__(self):
        carrier = tuple(self.carrier)
        if len(set(carrier)) != len(carrier):
            raise RelationError("carrier has duplicate elements")
        pairs = frozenset((x, y) for x, y in self.pairs)
        members = set(carrier)
        for x, y in pairs:
            if x not in members or y not in members:
                raise RelationError(f"pair ({item_label(x)}, {item_label(y)}) leaves the carrier")
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "pairs", pairs)
        for x in carrier:
            if (x, x) not in pairs:
                raise RelationError(f"not reflexive at {item_label(x)}")
        for x, y in pairs:
            for z in self.above[y]:
                if (x, z) not in pairs:
                    raise RelationError(
                        f"not transitive: {item_label(x)} ≼ {item_label(y)} ≼ {item_label(z)}"
                    )

    @cached_property
    def above(self) -> dict:
        out: dict = {x: set() for x in self.carrier}
        for x, y in self.pairs:
            out[x].add(y)
        return out

    def leq(self, x, y) -> bool:
        return (x, y) in self.pairs

    def less(self, x, y) -> bool:
        return (x, y) in self.pairs and (y, x) not in self.pairs

    @property
    def is_antisymmetric(self) -> bool:
        return all(x == y or (y, x) not in self.pairs for x, y in self.pairs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Preorder):
            return NotImplemented
        return set(self.carrier) == set(other.carrier) and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash((frozenset(self.carrier), self.pairs))

    def __repr__(self) -> str:
        strict = sorted(f"{item_label(x)}<{item_label(y)}" for x, y in self.pairs if self.less(x, y))
        return f"{type(self).__name__}({len(self.carrier)} elements; {', '.join(strict) or 'antichain'})"


class Poset(Preorder):
    def __post_init__(self):
        super().__post_init__()
        for x, y in self.pairs:
            if x != y and (y, x) in self.pairs:
                raise RelationError(f"not anti-symmetric: {item_label(x)} and {item_label(y)}")


def _closure(carrier: Sequence, pairs: Iterable) -> frozenset:
    g = nx.DiGraph()
    g.add_nodes_from(carrier)
    g.add_edges_from(pairs)
    closed = nx.transitive_closure(g, reflexive=True)
    return frozenset(closed.edges()) | frozenset((x, x) for x in carrier)


def preorder_from_pairs(carrier: Sequence, pairs: Iterable) -> Preorder:
    return Preorder(tuple(carrier), _closure(carrier, pairs))


def poset_from_pairs(carrier: Sequence, pairs: Iterable) -> Poset:
    return Poset(tuple(carrier), _closure(carrier, pairs))


def antichain(carrier: Sequence) -> Poset:
    return Poset(tuple(carrier), frozenset((x, x) for x in carrier))


def _domain_of(f: Mapping | MeasurableMap | Callable, carrier: Sequence | None) -> tuple:
    if carrier is not None:
        return tuple(carrier)
    if isinstance(f, MeasurableMap):
        return f.domain.points
    if isinstance(f, Mapping):
        return tuple(f)
    raise RelationError("a carrier is needed to transport a relation along a plain function")


def prel_preorder(p: Preorder, f: Mapping | MeasurableMap | Callable, carrier: Sequence | None = None) -> Preorder:
    """x ≼^f x′ iff f(x) ≼ f(x′)."""
    domain = _domain_of(f, carrier)
    apply = f.__getitem__ if isinstance(f, Mapping) else f
    image = {x: apply(x) for x in domain}
    pairs = frozenset((a, b) for a in domain for b in domain if p.leq(image[a], image[b]))
    return Preorder(domain, pairs)


def prel_map(p: Poset, f: Mapping | MeasurableMap | Callable, carrier: Sequence | None = None) -> Poset:
    q = prel_preorder(p, f, carrier)
    if not q.is_antisymmetric:
        raise NormalizationRequired(q)
    return Poset(q.carrier, q.pairs)


def normalize_preorder(q: Preorder) -> Poset:
    """Keep only the strict part (plus the diagonal); maximal sets are unchanged."""
    pairs = frozenset((x, y) for x, y in q.pairs if x == y or q.less(x, y))
    return Poset(q.carrier, pairs)


def maximize(p: Preorder, menu: Iterable) -> frozenset:
    k = frozenset(menu)
    members = set(p.carrier)
    if not k <= members:
        raise RelationError("menu leaves the carrier of the relation")
    return frozenset(m for m in k if not any(p.less(m, x) for x in k))


def maximize_as_choicefn(p: Preorder) -> RuleChoice:
    members = frozenset(p.carrier)
    return RuleChoice(
        lambda k: maximize(p, k),
        key=("maximize", p),
        guard=lambda k: k <= members,
        label="maximize",
    )


def maximal_subset_formula(p: Preorder, menu: Iterable, within: Iterable) -> bool:
    """Membership of p in ⋂_{k∈K∖L} ⋃_{l∈L} (B_{k≼l} ∖ B_{l≼k}).

    Equals maximize(p, K) ⊆ L on finite carriers.
    """
    k, l = frozenset(menu), frozenset(within)
    return all(any(p.leq(a, b) and not p.leq(b, a) for b in l) for a in k - l)


def _down_sets(p: Poset) -> list[frozenset]:
    below = {x: {y for y in p.carrier if p.leq(y, x)} for x in p.carrier}
    out = []
    for k in range(len(p.carrier) + 1):
        for s in all_menus(p.carrier, k, k) if k else [frozenset()]:
            if all(below[x] <= s for x in s):
                out.append(s)
    return out


def enumerate_posets(carrier: Sequence) -> Iterator[Poset]:
    """All labeled posets, built by one-point extensions.

    A new point x sits above a down-set D and below an up-set U, disjoint, with
    every element of D already below every element of U.
    """
    carrier = tuple(carrier)
    if not carrier:
        yield Poset((), frozenset())
        return
    for base in enumerate_posets(carrier[:-1]):
        x = carrier[-1]
        downs = _down_sets(base)
        ups = [frozenset(base.carrier) - d for d in downs]
        for d in downs:
            for u in ups:
                if d & u:
                    continue
                if not all(base.leq(a, b) for a in d for b in u):
                    continue
                pairs = set(base.pairs) | {(x, x)} | {(a, x) for a in d} | {(x, b) for b in u}
                yield Poset(carrier, frozenset(pairs))


def _set_partitions(items: Sequence) -> Iterator[list[tuple]]:
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [(head,), *part]
        for k in range(len(part)):
            yield [*part[:k], (head, *part[k]), *part[k + 1:]]


def enumerate_preorders(carrier: Sequence) -> Iterator[Preorder]:
    """All preorders: a partition into indifference classes plus a poset on the classes."""
    carrier = tuple(carrier)
    for blocks in _set_partitions(carrier):
        for order in enumerate_posets(range(len(blocks))):
            pairs = frozenset(
                (x, y) for a, b in order.pairs for x in blocks[a] for y in blocks[b]
            )
            yield Preorder(carrier, pairs)


def random_poset(carrier: Sequence, rng: random.Random, density: float = 0.4) -> Poset:
    order = list(carrier)
    rng.shuffle(order)
    edges = [(a, b) for i, a in enumerate(order) for b in order[i + 1:] if rng.random() < density]
    return poset_from_pairs(carrier, edges)


def is_poset_rationalizable(c: ChoiceFn, carrier: Sequence, cap: int = 5) -> Poset | None:
    """Brute force over every labeled poset; binary menus prune before full checks."""
    carrier = tuple(carrier)
    if len(carrier) > cap:
        raise CapExceededError("poset oracle carrier", len(carrier), cap)
    answers = {m: c.evaluate(m) for m in all_menus(carrier)}
    pair_menus = [m for m in answers if len(m) == 2]
    tried = 0
    for p in enumerate_posets(carrier):
        tried += 1
        if any(maximize(p, m) != answers[m] for m in pair_menus):
            continue
        if all(maximize(p, m) == a for m, a in answers.items()):
            log.debug("poset oracle: match after %d candidates", tried)
            return p
    log.debug("poset oracle: no match among %d candidates", tried)
    return None
