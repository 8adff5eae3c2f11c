"""Finite levels of the universal hierarchy and behavioral partition refinement.

Level n of player p judges acts over a base space: the opponent's actions at
n = 1, and A_opp × (image of the opponent's level n−1) above that. Images are
never enumerated globally. A type's level-n attitude is its θ pushed along
the map from opponent states to the base, and types are grouped into image
classes by evaluating attitudes on a finite menu universe.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, NamedTuple, Sequence

from .act import Act, auto_witnesses, enumerate_acts, factor_through, pullback, sample_acts
from .choice import ChoiceFn, RuleChoice, all_menus, gamma_map, menu_label, override, sample_menus
from .config import SearchBounds
from .errors import CapExceededError, ConfigError
from .space import FinSpace, MeasurableMap, discrete_space, identity_map, point_label, product, product_map
from .structure import PLAYERS, ChoiceStructure, Player

log = logging.getLogger("choicestruct.hierarchy")


def _is_total(c: ChoiceFn) -> bool:
    return isinstance(c, RuleChoice) and c.total


def effective_outcomes(x: ChoiceStructure, p: Player) -> tuple:
    """Outcomes up to p's utility when every θ_p is utility-driven, else all of Z."""
    views = {getattr(c, "utility", None) for c in x.theta(p).values()}
    if None in views or len(views) != 1:
        return x.outcomes.outcomes
    (view,) = views
    return view.classes()


def _transport_basis(x: ChoiceStructure, p: Player, to_base: MeasurableMap) -> list[Act]:
    return [factor_through(f, to_base, auto_witnesses(f, to_base), x.outcomes) for f in x.basis_acts(p)]


@dataclass
class ImageLevel:
    n: int
    player: Player
    base: FinSpace
    to_base: MeasurableMap
    attitudes: dict
    menus: tuple
    labels: dict
    complete: bool = False

    def classes(self) -> dict:
        out: dict = {}
        for t, lbl in self.labels.items():
            out.setdefault(lbl, []).append(t)
        return {k: tuple(v) for k, v in out.items()}


@dataclass
class HierarchyImage:
    structure: ChoiceStructure
    depth: int
    levels: dict = field(default_factory=dict)

    def level(self, p: Player, n: int) -> ImageLevel:
        return self.levels[(p, n)]

    def attitude(self, p: Player, n: int, t) -> ChoiceFn:
        return self.levels[(p, n)].attitudes[t]

    def kernel(self, p: Player, n: int) -> tuple:
        """Types grouped by equal υ_n on the level's evaluation universe."""
        return tuple(self.level(p, n).classes().values())

    def level_space(self, p: Player, n: int) -> FinSpace:
        return discrete_space(tuple(self.level(p, n).classes()), f"Img_{p.value}{n}")


def level_one_map(x: ChoiceStructure, p: Player) -> dict:
    """υ_1(t) = Γπ_1(θ(t)): choices over acts on the opponent's actions."""
    first = x.states(p).first
    return {t: gamma_map(c, first) for t, c in x.theta(p).items()}


def _universe(
    x: ChoiceStructure,
    p: Player,
    n: int,
    base: FinSpace,
    to_base: MeasurableMap,
    attitudes: dict,
    bounds: SearchBounds,
) -> tuple[tuple, bool]:
    menus: dict[frozenset, None] = {}
    for k in all_menus(_transport_basis(x, p, to_base), bounds.menu_cap):
        menus.setdefault(k)
    complete = False
    if all(_is_total(c) for c in attitudes.values()):
        zs = effective_outcomes(x, p)
        rng = random.Random(f"{bounds.seed}:{p.value}:{n}")
        if len(zs) ** len(base.atoms) <= bounds.act_cap:
            pool = enumerate_acts(base, zs, bounds.act_cap)
            complete = True
        else:
            pool = sample_acts(base, zs, bounds.samples, rng)
        for k in sample_menus(pool, bounds.samples, bounds.menu_cap, rng):
            menus.setdefault(k)
    if len(menus) > bounds.universe_cap:
        raise CapExceededError("evaluation universe", len(menus), bounds.universe_cap)
    usable = tuple(k for k in menus if all(c.can_evaluate(k) for c in attitudes.values()))
    return usable, complete


def _label_types(types: Sequence, attitudes: dict, menus: Sequence, n: int, previous: dict | None) -> dict:
    groups: dict[tuple, str] = {}
    labels = {}
    for t in types:
        answers = tuple(attitudes[t].evaluate(k) for k in menus)
        sig = (previous[t] if previous else None, answers)
        labels[t] = groups.setdefault(sig, f"{t}@{n}")
    return labels


def _build_level(
    x: ChoiceStructure,
    p: Player,
    n: int,
    opp_prev: ImageLevel | None,
    own_prev: ImageLevel | None,
    bounds: SearchBounds,
) -> ImageLevel:
    states = x.states(p)
    if n == 1:
        to_base = states.first
    else:
        opp_types = x.types(p.other)
        img = discrete_space(tuple(dict.fromkeys(opp_prev.labels[t] for t in opp_types.points)), f"Img_{p.other.value}{n - 1}")
        up = MeasurableMap(opp_types, img, opp_prev.labels)
        to_base = product_map(identity_map(x.actions(p.other)), up)
    base = to_base.codomain
    attitudes = {t: gamma_map(c, to_base) for t, c in x.theta(p).items()}
    menus, complete = _universe(x, p, n, base, to_base, attitudes, bounds)
    labels = _label_types(x.types(p).points, attitudes, menus, n, own_prev.labels if own_prev else None)
    return ImageLevel(n, p, base, to_base, attitudes, menus, labels, complete)


def hierarchy_map(x: ChoiceStructure, depth: int, bounds: SearchBounds | None = None) -> HierarchyImage:
    """υ_{p,n} for n ≤ depth: υ_{p,n+1} = Γ(id × υ_{opp,n}) ∘ θ_p."""
    if depth < 1:
        raise ConfigError(f"hierarchy depth must be at least 1, got {depth}")
    bounds = bounds or SearchBounds()
    h = HierarchyImage(x, depth)
    for n in range(1, depth + 1):
        for p in PLAYERS:
            h.levels[(p, n)] = _build_level(
                x, p, n, h.levels.get((p.other, n - 1)), h.levels.get((p, n - 1)), bounds
            )
        log.info(
            "level %d: %s",
            n,
            " | ".join(f"{p.value} {len(h.level(p, n).classes())} classes on {len(h.level(p, n).menus)} menus" for p in PLAYERS),
        )
    return h


class CoherenceResult(NamedTuple):
    ok: bool
    player: Player | None = None
    n: int | None = None
    type: object = None
    menu: frozenset | None = None
    expected: frozenset | None = None
    got: frozenset | None = None
    detail: str = ""


def _descend(h: HierarchyImage, p: Player, n: int) -> MeasurableMap | CoherenceResult:
    """The map from the level-(n+1) base of p down to its level-n base."""
    upper, lower = h.level(p, n + 1), h.level(p, n)
    if n == 1:
        return MeasurableMap(upper.base, lower.base, {pt: pt[0] for pt in upper.base.points})
    hi_labels = h.level(p.other, n).labels
    lo_labels = h.level(p.other, n - 1).labels
    down: dict = {}
    for s, lbl in hi_labels.items():
        if down.setdefault(lbl, lo_labels[s]) != lo_labels[s]:
            return CoherenceResult(False, p.other, n, s, detail=f"class {lbl} spans level {n - 1} classes")
    return MeasurableMap(upper.base, lower.base, {pt: (pt[0], down[pt[1]]) for pt in upper.base.points})


def coherence_check(h: HierarchyImage) -> CoherenceResult:
    """Re-evaluate Γψ(υ_{n+1}(t)) = υ_n(t) on every level-n menu."""
    for n in range(1, h.depth):
        for p in PLAYERS:
            psi = _descend(h, p, n)
            if isinstance(psi, CoherenceResult):
                return psi
            lower, upper = h.level(p, n), h.level(p, n + 1)
            for t in h.structure.types(p).points:
                projected = gamma_map(upper.attitudes[t], psi)
                current = lower.attitudes[t]
                for k in lower.menus:
                    if not (current.can_evaluate(k) and projected.can_evaluate(k)):
                        continue
                    expected, got = current.evaluate(k), projected.evaluate(k)
                    if expected != got:
                        log.debug("coherence fails: %s level %d on %s", t, n, menu_label(k))
                        return CoherenceResult(False, p, n, t, k, expected, got)
    return CoherenceResult(True)


def with_override(h: HierarchyImage, p: Player, n: int, t, menu: Iterable, answer: Iterable) -> HierarchyImage:
    level = h.level(p, n)
    attitudes = dict(level.attitudes)
    attitudes[t] = override(attitudes[t], menu, answer)
    levels = dict(h.levels)
    levels[(p, n)] = replace(level, attitudes=attitudes)
    return HierarchyImage(h.structure, h.depth, levels)


@dataclass(frozen=True)
class Separator:
    """θ(inside)(K) ⊆ L while θ(outside)(K) ⊄ L; K is a menu of acts on opponent states."""

    player: Player
    round: int
    menu: frozenset
    choice: frozenset
    inside: object
    outside: object


@dataclass
class BehavioralPartition:
    blocks_i: tuple
    blocks_j: tuple
    separators: list
    rounds: int
    complete: bool
    identical: frozenset
    bounds: SearchBounds
    history: tuple = ()  # blocks per player, before round 1 and after each round

    def blocks(self, p: Player) -> tuple:
        return self.blocks_i if p is Player.I else self.blocks_j

    def is_discrete(self, p: Player) -> bool:
        return all(len(b) == 1 for b in self.blocks(p))

    def together(self, p: Player, s, t) -> bool:
        return any(s in b and t in b for b in self.blocks(p))

    def unsplit_pairs(self) -> list[tuple]:
        return [(p, s, t) for p in PLAYERS for b in self.blocks(p) for s, t in combinations(b, 2)]


def observable_atoms(part: BehavioralPartition) -> dict:
    return {p: part.blocks(p) for p in PLAYERS}


def _block_label(block: Sequence) -> str:
    return "+".join(point_label(t) for t in block)


def _quotient(x: ChoiceStructure, p: Player, opp_blocks: Sequence) -> MeasurableMap:
    labels = {t: _block_label(b) for b in opp_blocks for t in b}
    classes = discrete_space(tuple(_block_label(b) for b in opp_blocks), f"B_{p.other.value}")
    base = product(x.actions(p.other), classes).space
    return MeasurableMap(x.states(p).space, base, {(a, t): (a, labels[t]) for a, t in x.states(p).space.points})


def _search_menus(
    x: ChoiceStructure, p: Player, q: MeasurableMap, bounds: SearchBounds, round_no: int
) -> tuple[Iterator[frozenset], bool]:
    """Menus of acts over the quotient base, pulled back to opponent states."""
    thetas = list(x.theta(p).values())
    basis = _transport_basis(x, p, q)
    first = list(all_menus(basis, bounds.menu_cap, 2))
    if not all(_is_total(c) for c in thetas):
        return (frozenset(pullback(g, q) for g in k) for k in first), False
    base = q.codomain
    zs = effective_outcomes(x, p)
    rng = random.Random(f"{bounds.seed}:{p.value}:refine:{round_no}")
    rest: Iterable[frozenset]
    complete = False
    if len(zs) ** len(base.atoms) <= bounds.act_cap:
        pool = enumerate_acts(base, zs, bounds.act_cap)
        total = sum(comb(len(pool), k) for k in range(2, bounds.menu_cap + 1))
        if total <= bounds.universe_cap:
            rest, complete = all_menus(pool, bounds.menu_cap, 2), True
        else:
            rest = sample_menus(pool, bounds.samples, bounds.menu_cap, rng)
    else:
        pool = basis + sample_acts(base, zs, bounds.samples, rng)
        rest = sample_menus(pool, bounds.samples, bounds.menu_cap, rng)

    def chain() -> Iterator[frozenset]:
        seen = set(first)
        for k in first:
            yield frozenset(pullback(g, q) for g in k)
        for k in rest:
            if k not in seen:
                yield frozenset(pullback(g, q) for g in k)

    return chain(), complete


def _orient(p: Player, round_no: int, k: frozenset, t, a_t: frozenset, s, a_s: frozenset) -> Separator:
    if not a_s <= a_t:
        return Separator(p, round_no, k, a_t, t, s)
    return Separator(p, round_no, k, a_s, s, t)


def _split(
    x: ChoiceStructure, p: Player, blocks: Sequence, menus: Iterable[frozenset], round_no: int, separators: list
) -> list[tuple]:
    theta = x.theta(p)
    current = [tuple(b) for b in blocks]
    for k in menus:
        if all(len(b) == 1 for b in current):
            break
        nxt = []
        for b in current:
            if len(b) == 1 or not all(theta[t].can_evaluate(k) for t in b):
                nxt.append(b)
                continue
            groups: dict[frozenset, list] = {}
            for t in b:
                groups.setdefault(theta[t].evaluate(k), []).append(t)
            if len(groups) == 1:
                nxt.append(b)
                continue
            (a0, g0), *others = groups.items()
            for ak, gk in others:
                separators.append(_orient(p, round_no, k, g0[0], a0, gk[0], ak))
            log.debug("round %d: %s splits %s", round_no, menu_label(k), _block_label(b))
            nxt.extend(tuple(g) for g in groups.values())
        current = nxt
    return current


def refine_partition(x: ChoiceStructure, bounds: SearchBounds | None = None) -> BehavioralPartition:
    """Split types that choose differently on some menu of acts measurable with
    respect to the opponent's current partition; both players refine
    simultaneously until nothing splits."""
    bounds = bounds or SearchBounds()
    blocks = {p: [tuple(x.types(p).points)] for p in PLAYERS}
    history = [dict(blocks)]
    separators: list[Separator] = []
    round_no = 0
    complete = {p: True for p in PLAYERS}
    while True:
        round_no += 1
        new_blocks = {}
        for p in PLAYERS:
            if all(len(b) == 1 for b in blocks[p]):
                new_blocks[p], complete[p] = blocks[p], True
                continue
            q = _quotient(x, p, blocks[p.other])
            menus, complete[p] = _search_menus(x, p, q, bounds, round_no)
            new_blocks[p] = _split(x, p, blocks[p], menus, round_no, separators)
        changed = any(len(new_blocks[p]) != len(blocks[p]) for p in PLAYERS)
        log.info(
            "refinement round %d: %s",
            round_no,
            " | ".join(f"{p.value} {len(new_blocks[p])} blocks" for p in PLAYERS),
        )
        blocks = new_blocks
        history.append(dict(blocks))
        if not changed:
            break
    identical = frozenset(
        (p, s, t)
        for p in PLAYERS
        for b in blocks[p]
        for s, t in combinations(b, 2)
        if x.theta(p)[s] == x.theta(p)[t]
    )
    return BehavioralPartition(
        tuple(blocks[Player.I]),
        tuple(blocks[Player.J]),
        separators,
        round_no,
        all(complete.values()),
        identical,
        bounds,
        tuple({p: tuple(h[p]) for p in PLAYERS} for h in history),
    )


class VerdictKind(str, Enum):
    NON_REDUNDANT = "NonRedundant"
    REDUNDANT = "Redundant"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    witnesses: tuple = ()
    detail: str = ""


def non_redundancy_verdict(part: BehavioralPartition) -> Verdict:
    pairs = part.unsplit_pairs()
    if not pairs:
        return Verdict(VerdictKind.NON_REDUNDANT)
    if part.complete:
        return Verdict(VerdictKind.REDUNDANT, tuple(pairs), "search exhausted every act and menu within bounds")
    if all(pair in part.identical for pair in pairs):
        return Verdict(VerdictKind.REDUNDANT, tuple(pairs), "unsplit types share the same choice function")
    b = part.bounds
    return Verdict(
        VerdictKind.INCONCLUSIVE,
        tuple(pairs),
        f"bounded search: act_cap={b.act_cap} menu_cap={b.menu_cap} samples={b.samples} universe_cap={b.universe_cap}",
    )
