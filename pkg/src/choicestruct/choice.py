"""Choice functions over finite menus, events B^K_L and the contravariant actions.

A ChoiceFn is either a TableChoice (explicit menu table over a declared
universe) or a RuleChoice (evaluated on demand). C(∅) = ∅ for every choice
function. Derived choice functions (relabel, gamma_map, lifts) are RuleChoices
that evaluate their source lazily.
"""
from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from itertools import combinations
from itertools import product as cartesian
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .act import Act, act_label, pullback
from .errors import (
    CapExceededError,
    CompatibilityError,
    ContractionError,
    MenuOutsideUniverseError,
    NotInjectiveError,
)
from .space import MeasurableMap, chain_colimit, point_label

Menu = frozenset


def item_label(x: Any) -> str:
    return act_label(x) if isinstance(x, Act) else point_label(x)


def ordered(items: Iterable, reference: Sequence | None = None) -> tuple:
    """Canonical order: position in `reference` first, then label."""
    rank = {x: k for k, x in enumerate(reference or ())}
    return tuple(sorted(items, key=lambda x: (rank.get(x, len(rank)), item_label(x))))


def menu_label(menu: Iterable, reference: Sequence | None = None) -> str:
    return "{" + ",".join(item_label(x) for x in ordered(menu, reference)) + "}"


def _as_function(f: Mapping | Callable) -> Callable:
    if isinstance(f, Mapping):
        return f.__getitem__
    return f


class ChoiceFn(ABC):
    normal = True

    def evaluate(self, menu: Iterable) -> frozenset:
        k = frozenset(menu)
        if not k:
            return frozenset()
        if not self.can_evaluate(k):
            raise MenuOutsideUniverseError(f"menu {menu_label(k)} is outside the universe of this choice function")
        if self.normal and len(k) == 1:
            return k
        answer = frozenset(self._choose(k))
        if not answer <= k:
            raise ContractionError(k, answer, f"choice {menu_label(answer)} is not within menu {menu_label(k)}")
        return answer

    __call__ = evaluate

    def can_evaluate(self, menu: frozenset) -> bool:
        return True

    @abstractmethod
    def _choose(self, menu: frozenset) -> Iterable: ...


class TableChoice(ChoiceFn):
    """Extensional choice function; singletons are always evaluable."""

    def __init__(self, table: Mapping[Iterable, Iterable], label: str = ""):
        self.table: dict[frozenset, frozenset] = {}
        self.label = label
        for raw_menu, raw_answer in table.items():
            k, answer = frozenset(raw_menu), frozenset(raw_answer)
            if not answer <= k:
                raise ContractionError(k, answer, f"choice {menu_label(answer)} is not within menu {menu_label(k)}")
            if len(k) == 1 and answer != k:
                raise ContractionError(k, answer, f"singleton menu {menu_label(k)} must choose itself")
            if k:
                self.table[k] = answer

    def can_evaluate(self, menu: frozenset) -> bool:
        return len(menu) <= 1 or menu in self.table

    def _choose(self, menu: frozenset) -> frozenset:
        return self.table[menu]

    @property
    def menus(self) -> tuple:
        return tuple(self.table)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TableChoice):
            return NotImplemented
        return self.table == other.table

    def __hash__(self) -> int:
        return hash(frozenset(self.table.items()))

    def __repr__(self) -> str:
        return f"TableChoice({self.label or len(self.table)})"


class RuleChoice(ChoiceFn):
    """Intensional choice function.

    `key` makes two rules structurally equal (same criterion, same parameters);
    rules without a key compare by identity. `guard` restricts the evaluable
    menus; `normal=False` lets the rule decide singletons itself.
    """

    def __init__(
        self,
        rule: Callable[[frozenset], Iterable],
        *,
        key: Hashable | None = None,
        normal: bool = True,
        guard: Callable[[frozenset], bool] | None = None,
        utility: Any = None,
        label: str = "",
    ):
        self.rule = rule
        self.key = key
        self.normal = normal
        self.guard = guard
        self.utility = utility
        self.label = label

    @property
    def total(self) -> bool:
        return self.guard is None

    def can_evaluate(self, menu: frozenset) -> bool:
        return self.guard is None or self.guard(menu)

    def _choose(self, menu: frozenset) -> Iterable:
        return self.rule(menu)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, RuleChoice) or self.key is None or other.key is None:
            return False
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key) if self.key is not None else id(self)

    def __repr__(self) -> str:
        return f"RuleChoice({self.label or self.key or hex(id(self))})"


@dataclass(frozen=True)
class ChoiceEvent:
    """B^K_L: the choice functions selecting within L on menu K."""

    K: frozenset
    L: frozenset

    def __post_init__(self):
        object.__setattr__(self, "K", frozenset(self.K))
        object.__setattr__(self, "L", frozenset(self.L))
        if not self.L <= self.K:
            raise ContractionError(self.K, self.L, "event needs L within K")


def in_event(c: ChoiceFn, e: ChoiceEvent) -> bool:
    return c.evaluate(e.K) <= e.L


def relabel(c: ChoiceFn, f: Mapping | Callable) -> RuleChoice:
    """𝒞f: K ↦ f^{-1}[c(f[K])] ∩ K."""
    apply = _as_function(f)

    def rule(k: frozenset) -> frozenset:
        chosen = c.evaluate(frozenset(apply(x) for x in k))
        return frozenset(x for x in k if apply(x) in chosen)

    def guard(k: frozenset) -> bool:
        return c.can_evaluate(frozenset(apply(x) for x in k))

    return RuleChoice(rule, normal=False, guard=None if _is_total(c) else guard)


def _is_total(c: ChoiceFn) -> bool:
    return isinstance(c, RuleChoice) and c.total


def gamma_map(c: ChoiceFn, phi: MeasurableMap) -> RuleChoice:
    """Γφ: menus of acts over φ's codomain are judged through their pullbacks."""
    key = None
    if isinstance(c, (RuleChoice, TableChoice)) and getattr(c, "key", True) is not None:
        key = ("gamma", c, phi)
    out = relabel(c, lambda g: pullback(g, phi, name=""))
    out.key = key
    return out


def lift_along_injection(c: ChoiceFn, f: Mapping) -> RuleChoice:
    """c′(K) = f[c(f^{-1}[K])], so that relabel(c′, f) = c.

    Menus disjoint from f's image choose ∅; the lift is not singleton-normal.
    """
    inverse: dict = {}
    for x, y in f.items():
        if y in inverse:
            raise NotInjectiveError(f"{point_label(inverse[y])} and {point_label(x)} both map to {point_label(y)}")
        inverse[y] = x

    def preimage(k: frozenset) -> frozenset:
        return frozenset(inverse[y] for y in k if y in inverse)

    def rule(k: frozenset) -> frozenset:
        return frozenset(f[x] for x in c.evaluate(preimage(k)))

    def guard(k: frozenset) -> bool:
        return c.can_evaluate(preimage(k))

    return RuleChoice(rule, normal=False, guard=None if _is_total(c) else guard)


def all_menus(items: Sequence, max_size: int | None = None, min_size: int = 1) -> Iterator[frozenset]:
    items = tuple(items)
    top = len(items) if max_size is None else min(max_size, len(items))
    for size in range(min_size, top + 1):
        for combo in combinations(items, size):
            yield frozenset(combo)


def sample_menus(items: Sequence, count: int, max_size: int, rng: random.Random) -> list[frozenset]:
    items = tuple(items)
    if len(items) < 2:
        return []
    top = min(max_size, len(items))
    seen: dict[frozenset, None] = {}
    for _ in range(count):
        size = rng.randint(2, top) if top >= 2 else 1
        seen.setdefault(frozenset(rng.sample(items, size)))
    return list(seen)


def first_disagreement(c1: ChoiceFn, c2: ChoiceFn, menus: Iterable) -> frozenset | None:
    for k in menus:
        if c1.evaluate(k) != c2.evaluate(k):
            return frozenset(k)
    return None


def pushforward_event(e: ChoiceEvent, f: Mapping | Callable) -> ChoiceEvent:
    """The event B^{f[K]}_{L̂} whose preimage under 𝒞f is B^K_L."""
    apply = _as_function(f)
    image = frozenset(apply(x) for x in e.K)
    l_hat = frozenset(y for y in image if all(x in e.L for x in e.K if apply(x) == y))
    return ChoiceEvent(image, l_hat)


def _subsets(k: Sequence) -> list[frozenset]:
    return [frozenset(s) for r in range(len(k) + 1) for s in combinations(k, r)]


def enumerate_choice_fns(items: Sequence, cap: int = 100_000) -> Iterator[TableChoice]:
    """Every singleton-normal choice function on all nonempty menus of `items`."""
    menus = [m for m in all_menus(items, min_size=2)]
    count = 1
    for m in menus:
        count *= 2 ** len(m)
    if count > cap:
        raise CapExceededError("choice function enumeration", count, cap)
    options = [_subsets(ordered(m, items)) for m in menus]
    for answers in cartesian(*options):
        yield TableChoice(dict(zip(menus, answers)))


def random_choice_fn(items: Sequence, rng: random.Random, allow_empty: bool = True) -> TableChoice:
    table = {}
    for m in all_menus(items, min_size=2):
        k = ordered(m, items)
        while True:
            answer = frozenset(x for x in k if rng.random() < 0.5)
            if answer or allow_empty:
                break
        table[m] = answer
    return TableChoice(table)


class Violation(NamedTuple):
    kind: str  # "contraction" | "expansion"
    small: frozenset
    large: frozenset
    items: tuple


def iia_violations(c: ChoiceFn, menus: Iterable) -> list[Violation]:
    """Context-dependence witnesses among nested menus L ⊆ K.

    contraction: x chosen from K, x in L, x not chosen from L.
    expansion: x, y both chosen from L, x chosen from K but y not.
    """
    menus = [frozenset(m) for m in menus]
    answers = {m: c.evaluate(m) for m in menus}
    out = []
    for large in menus:
        for small in menus:
            if small == large or not small <= large:
                continue
            for x in answers[large] & small:
                if x not in answers[small]:
                    out.append(Violation("contraction", small, large, (x,)))
            for x in answers[small] & answers[large]:
                for y in answers[small] - answers[large]:
                    out.append(Violation("expansion", small, large, (x, y)))
    return out


def override(c: ChoiceFn, menu: Iterable, answer: Iterable) -> RuleChoice:
    """c, except on one menu."""
    target, forced = frozenset(menu), frozenset(answer)
    if not forced <= target:
        raise ContractionError(target, forced)

    def rule(k: frozenset) -> frozenset:
        return forced if k == target else c.evaluate(k)

    def guard(k: frozenset) -> bool:
        return k == target or c.can_evaluate(k)

    return RuleChoice(rule, normal=False, guard=None if _is_total(c) else guard)


def colimit_choice(
    levels: Sequence[Sequence],
    maps: Sequence[Mapping],
    family: Sequence[ChoiceFn],
    max_size: int | None = None,
) -> RuleChoice:
    """Choice function on the colimit of a chain from a compatible family φ_n.

    μ(K) = ι_m[φ_m(K′)] where m is the least level whose image covers K and
    K′ is the full ι_m-preimage of K at that level.
    """
    if len(family) != len(levels):
        raise CompatibilityError(f"{len(levels)} levels but {len(family)} choice functions")
    for n, f in enumerate(maps):
        transported = relabel(family[n + 1], f)
        bad = first_disagreement(family[n], transported, all_menus(levels[n], max_size))
        if bad is not None:
            raise CompatibilityError(f"level {n} disagrees with level {n + 1} on menu {menu_label(bad, levels[n])}")
    colim = chain_colimit(levels, maps)
    covers = [frozenset(inj.values()) for inj in colim.injections]

    def rule(k: frozenset) -> frozenset:
        for m, cover in enumerate(covers):
            if k <= cover:
                inj = colim.injections[m]
                k_prime = frozenset(x for x in levels[m] if inj[x] in k)
                return frozenset(inj[x] for x in family[m].evaluate(k_prime))
        raise MenuOutsideUniverseError(f"menu {menu_label(k)} is not over the colimit")

    def guard(k: frozenset) -> bool:
        return k <= frozenset(colim.points)

    mu = RuleChoice(rule, normal=False, guard=guard, label="colimit")
    for n, inj in enumerate(colim.injections):
        bad = first_disagreement(relabel(mu, inj), family[n], all_menus(levels[n], max_size))
        if bad is not None:
            raise CompatibilityError(f"colimit choice does not restrict to level {n} on {menu_label(bad, levels[n])}")
    return mu
