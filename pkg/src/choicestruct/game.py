"""Two-player normal-form games and rationalizability under EU, maxmin and regret.

An action is justifiable when some belief in the searched family puts its act
in the criterion's choice set over the menu of the player's own surviving
action acts, with acts restricted to the opponent's surviving actions. Absence
of a witness is relative to the family.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Mapping, NamedTuple, Sequence

from .act import Act, OutcomeSet
from .config import default_families
from .criteria import CredalSet, UtilityView, criterion_choice, full_simplex, interval_belief
from .errors import BeliefError, SpaceError
from .space import discrete_space

log = logging.getLogger("choicestruct.game")


class FamilyKind(str, Enum):
    GRID_POINTS = "grid_points"
    FULL_SIMPLEX = "full_simplex"
    GRID_INTERVALS = "grid_intervals"
    GRID_HULLS = "grid_hulls"


def _compositions(total: int, parts: int) -> Iterator[tuple]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


@dataclass(frozen=True)
class BeliefFamily:
    kind: FamilyKind
    n: int = 8
    max_vertices: int = 3

    def __post_init__(self):
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        if self.n < 1:
            raise BeliefError(f"grid resolution must be positive, got {self.n}")
        if self.max_vertices < 2:
            raise BeliefError("hull families need at least 2 vertices")

    def grid(self, support: Sequence) -> list[tuple]:
        return [tuple(Fraction(k, self.n) for k in c) for c in _compositions(self.n, len(support))]

    def generate(self, support: Sequence) -> Iterator[CredalSet]:
        support = tuple(support)
        if self.kind is FamilyKind.GRID_POINTS:
            for v in self.grid(support):
                yield CredalSet(support, (v,))
        elif self.kind is FamilyKind.FULL_SIMPLEX:
            yield full_simplex(support)
        elif self.kind is FamilyKind.GRID_INTERVALS:
            if len(support) != 2:
                return
            steps = [Fraction(k, self.n) for k in range(self.n + 1)]
            for lo, hi in combinations(steps, 2):
                yield interval_belief(support, lo, hi)
        else:
            points = self.grid(support)
            for size in range(2, self.max_vertices + 1):
                for combo in combinations(points, size):
                    yield CredalSet(support, combo)

    def describe(self) -> str:
        if self.kind is FamilyKind.FULL_SIMPLEX:
            return self.kind.value
        if self.kind is FamilyKind.GRID_HULLS:
            return f"{self.kind.value}({self.n},{self.max_vertices})"
        return f"{self.kind.value}({self.n})"


class Criterion(str, Enum):
    EU = "eu"
    MAXMIN = "maxmin"
    REGRET = "regret"


@dataclass(frozen=True)
class CriterionSpec:
    criterion: Criterion
    families: tuple

    def __post_init__(self):
        object.__setattr__(self, "criterion", Criterion(self.criterion))
        object.__setattr__(self, "families", tuple(self.families))
        if not self.families:
            raise BeliefError("a criterion needs at least one belief family")


def fmt_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def payoff_id(pair: Sequence[Fraction]) -> str:
    return "(" + ",".join(fmt_rational(x) for x in pair) + ")"


@dataclass(frozen=True)
class GameSpec:
    players: tuple
    actions: tuple
    payoffs: Mapping = field(repr=False, hash=False)
    criteria: tuple = ()

    def __post_init__(self):
        if len(self.players) != 2 or len(set(self.players)) != 2:
            raise SpaceError("a game needs exactly two distinct players")
        actions = tuple(tuple(a) for a in self.actions)
        if len(actions) != 2:
            raise SpaceError("a game needs one action list per player")
        for name, acts in zip(self.players, actions):
            if not acts:
                raise SpaceError(f"player {name} has no actions")
            if len(set(acts)) != len(acts):
                raise SpaceError(f"player {name} has duplicate actions")
        payoffs = {}
        for a in actions[0]:
            for b in actions[1]:
                if (a, b) not in self.payoffs:
                    raise SpaceError(f"no payoff for profile ({a}, {b})")
                pair = tuple(Fraction(x) for x in self.payoffs[(a, b)])
                if len(pair) != 2:
                    raise SpaceError(f"payoff for ({a}, {b}) needs two entries")
                payoffs[(a, b)] = pair
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "payoffs", payoffs)
        object.__setattr__(self, "players", tuple(self.players))
        object.__setattr__(self, "criteria", tuple(self.criteria))

    def payoff(self, player: int, own, other) -> Fraction:
        profile = (own, other) if player == 0 else (other, own)
        return self.payoffs[profile][player]

    def outcome_of(self, player: int, own, other) -> str:
        profile = (own, other) if player == 0 else (other, own)
        return payoff_id(self.payoffs[profile])

    def with_criteria(self, criteria: Sequence[CriterionSpec]) -> GameSpec:
        return GameSpec(self.players, self.actions, self.payoffs, tuple(criteria))


def outcome_set(g: GameSpec) -> OutcomeSet:
    seen: dict[str, tuple] = {}
    for a in g.actions[0]:
        for b in g.actions[1]:
            pair = g.payoffs[(a, b)]
            seen.setdefault(payoff_id(pair), pair)
    return OutcomeSet(tuple(seen), tuple(seen.values()))


def action_acts(g: GameSpec, player: int, survivors: Sequence | None = None) -> list[Act]:
    """f_a over the opponent's (surviving) actions, one per own action."""
    opp = g.actions[1 - player] if survivors is None else tuple(survivors)
    space = discrete_space(opp, f"A_{g.players[1 - player]}")
    return [
        Act(space, tuple(g.outcome_of(player, a, b) for b in opp), f"f_{a}")
        for a in g.actions[player]
    ]


def utility_view(g: GameSpec, player: int) -> UtilityView:
    return UtilityView.of(outcome_set(g), player)


def justifiable(
    g: GameSpec,
    player: int,
    action,
    survivors: Sequence,
    families: Sequence[BeliefFamily],
    criterion: Criterion | str | None = None,
    own_survivors: Sequence | None = None,
) -> CredalSet | None:
    if action not in g.actions[player]:
        raise SpaceError(f"{action!r} is not an action of player {g.players[player]}")
    own = tuple(g.actions[player]) if own_survivors is None else tuple(own_survivors)
    if action not in own:
        raise SpaceError(f"{action!r} is not among player {g.players[player]}'s surviving actions")
    if not survivors:
        raise SpaceError("the opponent has no surviving actions")
    name = Criterion(criterion if criterion is not None else g.criteria[player].criterion).value
    acts = action_acts(g, player, survivors)
    target = acts[g.actions[player].index(action)]
    menu = frozenset(acts[g.actions[player].index(a)] for a in own)
    u = utility_view(g, player)
    for family in families:
        for belief in family.generate(tuple(survivors)):
            if name == "eu" and not belief.is_point:
                continue
            if target in criterion_choice(name, belief, u).evaluate(menu):
                return belief
    return None


class Round(NamedTuple):
    number: int
    deleted: tuple  # per player
    witnesses: dict  # (player, action) -> CredalSet


@dataclass
class Rationalization:
    players: tuple
    survivors: tuple
    rounds: list

    def survivors_line(self) -> str:
        return " | ".join(f"{p}: {','.join(s)}" for p, s in zip(self.players, self.survivors))


def rationalize(g: GameSpec) -> Rationalization:
    """Simultaneous deletion of unjustifiable actions until nothing changes."""
    if len(g.criteria) != 2:
        raise BeliefError("rationalize needs a criterion for each player")
    survivors = [tuple(g.actions[0]), tuple(g.actions[1])]
    rounds = []
    number = 0
    while True:
        number += 1
        witnesses = {}
        keep: list[tuple] = []
        for p in (0, 1):
            spec = g.criteria[p]
            kept = []
            for a in survivors[p]:
                w = justifiable(g, p, a, survivors[1 - p], spec.families, spec.criterion, survivors[p])
                if w is not None:
                    witnesses[(p, a)] = w
                    kept.append(a)
            keep.append(tuple(kept))
        deleted = tuple(tuple(a for a in survivors[p] if a not in keep[p]) for p in (0, 1))
        rounds.append(Round(number, deleted, witnesses))
        log.info(
            "round %d: deleted %s",
            number,
            " | ".join(f"{g.players[p]}: {','.join(deleted[p]) or '-'}" for p in (0, 1)),
        )
        if not any(deleted):
            break
        survivors = list(keep)
    return Rationalization(g.players, tuple(survivors), rounds)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_open: bool
    hi_open: bool

    def __contains__(self, p) -> bool:
        p = Fraction(p)
        above = p > self.lo if self.lo_open else p >= self.lo
        below = p < self.hi if self.hi_open else p <= self.hi
        return above and below

    def __str__(self) -> str:
        return (
            f"{'(' if self.lo_open else '['}{fmt_rational(self.lo)}, "
            f"{fmt_rational(self.hi)}{')' if self.hi_open else ']'}"
        )


def dominating_mixtures(g: GameSpec, player: int, target, a, b) -> Interval | None:
    """Weights p for which p·a + (1−p)·b strictly dominates `target`."""
    lo, lo_open = Fraction(0), False
    hi, hi_open = Fraction(1), False
    for s in g.actions[1 - player]:
        ua, ub, ut = (g.payoff(player, x, s) for x in (a, b, target))
        slope, need = ua - ub, ut - ub
        if slope > 0:
            bound = need / slope
            if bound > lo or (bound == lo and not lo_open):
                lo, lo_open = bound, True
        elif slope < 0:
            bound = need / slope
            if bound < hi or (bound == hi and not hi_open):
                hi, hi_open = bound, True
        elif ub <= ut:
            return None
    if lo > hi or (lo == hi and (lo_open or hi_open)):
        return None
    return Interval(lo, hi, lo_open, hi_open)


EXAMPLE_ROWS = {
    "u": ((5, 1), (0, 0)),
    "m": ((3, 2), (0, 1)),
    "c": ((1, 1), (3, 0)),
    "d": ((1, 2), (2, 3)),
}


def example_game(criterion: Criterion | str | None = None, grid: int | None = None) -> GameSpec:
    """Row player i (u, m, c, d) against column player j (l, r); both use `criterion`."""
    payoffs = {(a, b): EXAMPLE_ROWS[a][k] for a in EXAMPLE_ROWS for k, b in enumerate(("l", "r"))}
    criteria = ()
    if criterion is not None:
        name = Criterion(criterion)
        spec = CriterionSpec(name, default_families(name.value, grid))
        criteria = (spec, spec)
    return GameSpec(("i", "j"), (tuple(EXAMPLE_ROWS), ("l", "r")), payoffs, criteria)
