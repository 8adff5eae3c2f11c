"""Decision criteria over credal sets, evaluated in exact rational arithmetic.

Credal sets are stored by their extreme points. Expected utility and expected
regret are linear in the belief, so the worst case over the hull is attained
at a vertex and every criterion only looks at vertices.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product as cartesian
from typing import Iterable, Mapping, Sequence

from .act import Act, OutcomeSet
from .choice import RuleChoice, item_label
from .errors import BeliefError


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class CredalSet:
    support: tuple
    extreme_points: tuple

    def __post_init__(self):
        support = tuple(self.support)
        if not support or len(set(support)) != len(support):
            raise BeliefError("support must be nonempty and duplicate-free")
        vertices = tuple(tuple(_frac(x) for x in v) for v in self.extreme_points)
        if not vertices:
            raise BeliefError("a credal set needs at least one extreme point")
        for v in vertices:
            if len(v) != len(support):
                raise BeliefError(f"vertex has {len(v)} entries for {len(support)} states")
            if any(x < 0 for x in v):
                raise BeliefError(f"negative probability in {_fmt_vertex(support, v)}")
            if sum(v) != 1:
                raise BeliefError(f"probabilities sum to {sum(v)} in {_fmt_vertex(support, v)}")
        if len(set(vertices)) != len(vertices):
            raise BeliefError("extreme points must be distinct")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "extreme_points", vertices)

    @property
    def is_point(self) -> bool:
        return len(self.extreme_points) == 1

    def extend_vacuous(self, types: Sequence) -> CredalSet:
        """Lift a belief over opponent actions to opponent states (action, type).

        Nothing is known about types: each vertex is combined with every
        assignment of a type to each action it charges.
        """
        types = tuple(types)
        states = tuple((a, t) for a in self.support for t in types)
        pos = {s: k for k, s in enumerate(states)}
        out: dict[tuple, None] = {}
        for v in self.extreme_points:
            charged = [k for k, x in enumerate(v) if x]
            for choice in cartesian(types, repeat=len(charged)):
                w = [Fraction(0)] * len(states)
                for k, t in zip(charged, choice):
                    w[pos[(self.support[k], t)]] = v[k]
                out.setdefault(tuple(w))
        return CredalSet(states, tuple(out))

    def extend_uniform(self, types: Sequence) -> CredalSet:
        """Lift to opponent states with each action's mass split evenly over types.

        A single prior stays a single prior.
        """
        types = tuple(types)
        share = Fraction(1, len(types))
        states = tuple((a, t) for a in self.support for t in types)
        vertices = tuple(tuple(x * share for x in v for _ in types) for v in self.extreme_points)
        return CredalSet(states, vertices)

    def describe(self) -> str:
        return "hull[" + "; ".join(_fmt_vertex(self.support, v) for v in self.extreme_points) + "]"


def _fmt_vertex(support: Sequence, v: Sequence) -> str:
    return "{" + ", ".join(f"{item_label(s)}:{x}" for s, x in zip(support, v) if x) + "}"


def point_belief(support: Sequence, probs: Mapping) -> CredalSet:
    unknown = set(probs) - set(support)
    if unknown:
        raise BeliefError(f"belief mentions states outside the support: {sorted(map(str, unknown))}")
    return CredalSet(tuple(support), (tuple(_frac(probs.get(s, 0)) for s in support),))


def full_simplex(support: Sequence) -> CredalSet:
    support = tuple(support)
    return CredalSet(support, tuple(
        tuple(Fraction(int(i == k)) for i in range(len(support))) for k in range(len(support))
    ))


def interval_belief(support: Sequence, lower, upper) -> CredalSet:
    """Two states; the probability of the second lies in [lower, upper]."""
    support = tuple(support)
    if len(support) != 2:
        raise BeliefError(f"interval beliefs need exactly 2 states, got {len(support)}")
    lo, hi = _frac(lower), _frac(upper)
    if not 0 <= lo <= hi <= 1:
        raise BeliefError(f"bad probability interval [{lo}, {hi}]")
    vertices = ((1 - lo, lo),) if lo == hi else ((1 - lo, lo), (1 - hi, hi))
    return CredalSet(support, vertices)


@dataclass(frozen=True)
class UtilityView:
    player: int
    values: tuple  # ((outcome, utility), ...)

    @classmethod
    def of(cls, outcomes: OutcomeSet, player: int) -> UtilityView:
        return cls(player, tuple((z, outcomes.utility(player, z)) for z in outcomes.outcomes))

    def __post_init__(self):
        object.__setattr__(self, "values", tuple((z, _frac(u)) for z, u in self.values))

    def __call__(self, z) -> Fraction:
        return self.table[z]

    @cached_property
    def table(self) -> dict:
        return dict(self.values)

    def classes(self) -> tuple:
        """Representative outcomes, one per distinct utility, in outcome order."""
        seen: dict[Fraction, object] = {}
        for z, u in self.values:
            seen.setdefault(u, z)
        return tuple(seen.values())


def _state_utilities(f: Act, support: Sequence, u: UtilityView) -> tuple:
    return tuple(u(f(s)) for s in support)


def expected_utility(f: Act, vertex: Sequence, support: Sequence, u: UtilityView) -> Fraction:
    return sum((p * x for p, x in zip(vertex, _state_utilities(f, support, u)) if p), Fraction(0))


def worst_case_utility(f: Act, belief: CredalSet, u: UtilityView) -> Fraction:
    return min(expected_utility(f, v, belief.support, u) for v in belief.extreme_points)


def regret_profile(f: Act, menu: Iterable[Act], support: Sequence, u: UtilityView) -> tuple:
    """State-wise ex-post regret of f against the best act in the menu."""
    rows = [_state_utilities(g, support, u) for g in menu]
    best = tuple(max(col) for col in zip(*rows))
    own = _state_utilities(f, support, u)
    return tuple(b - x for b, x in zip(best, own))


def worst_case_regret(f: Act, menu: Iterable[Act], belief: CredalSet, u: UtilityView) -> Fraction:
    profile = regret_profile(f, menu, belief.support, u)
    return max(sum((p * r for p, r in zip(v, profile) if p), Fraction(0)) for v in belief.extreme_points)


def _argbest(menu: frozenset, score, highest: bool) -> frozenset:
    scores = {f: score(f) for f in menu}
    target = max(scores.values()) if highest else min(scores.values())
    return frozenset(f for f, s in scores.items() if s == target)


def eu_choice(belief: CredalSet, u: UtilityView) -> RuleChoice:
    if not belief.is_point:
        raise BeliefError("expected utility needs a single prior")
    (vertex,) = belief.extreme_points
    return RuleChoice(
        lambda k: _argbest(k, lambda f: expected_utility(f, vertex, belief.support, u), True),
        key=("eu", belief, u),
        utility=u,
        label="eu",
    )


def maxmin_choice(belief: CredalSet, u: UtilityView) -> RuleChoice:
    return RuleChoice(
        lambda k: _argbest(k, lambda f: worst_case_utility(f, belief, u), True),
        key=("maxmin", belief, u),
        utility=u,
        label="maxmin",
    )


def regret_choice(belief: CredalSet, u: UtilityView) -> RuleChoice:
    return RuleChoice(
        lambda k: _argbest(k, lambda f: worst_case_regret(f, k, belief, u), False),
        key=("regret", belief, u),
        utility=u,
        label="regret",
    )


CRITERIA = {"eu": eu_choice, "maxmin": maxmin_choice, "regret": regret_choice}


def lift_to_states(name: str, belief: CredalSet, types: Sequence) -> CredalSet:
    """Bring a belief written over opponent actions to opponent states.

    Beliefs already over (action, type) states pass through. Expected utility
    splits each action's mass uniformly over types; maxmin and regret assume
    nothing about types.
    """
    types = tuple(types)
    if all(isinstance(s, tuple) for s in belief.support):
        return belief
    if name.lower() == "eu":
        return belief.extend_uniform(types)
    return belief.extend_vacuous(types)


def criterion_choice(name: str, belief: CredalSet, u: UtilityView) -> RuleChoice:
    try:
        return CRITERIA[name.lower()](belief, u)
    except KeyError:
        raise BeliefError(f"unknown criterion {name!r}; expected one of {sorted(CRITERIA)}") from None
