"""Savage acts: measurable step functions from a FinSpace into the outcome set."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product as cartesian
from typing import Mapping, NamedTuple, Sequence

from .errors import CapExceededError, MeasurabilityError, SpaceError, WitnessError
from .space import FinSpace, Limit, MeasurableMap, Point, discrete_space, inclusion, point_label


@dataclass(frozen=True)
class OutcomeSet:
    outcomes: tuple
    utilities: tuple | None = None

    def __post_init__(self):
        outcomes = tuple(self.outcomes)
        if not outcomes:
            raise SpaceError("outcome set is empty")
        if len(set(outcomes)) != len(outcomes):
            raise SpaceError("outcome identifiers must be distinct")
        object.__setattr__(self, "outcomes", outcomes)
        if self.utilities is not None:
            rows = tuple(tuple(Fraction(u) for u in row) for row in self.utilities)
            if len(rows) != len(outcomes):
                raise SpaceError(f"{len(outcomes)} outcomes but {len(rows)} utility vectors")
            widths = {len(row) for row in rows}
            if len(widths) != 1 or 0 in widths:
                raise SpaceError("every outcome needs a utility for every player")
            object.__setattr__(self, "utilities", rows)

    def __len__(self) -> int:
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)

    def __contains__(self, z: object) -> bool:
        return z in self.index

    @cached_property
    def index(self) -> dict:
        return {z: k for k, z in enumerate(self.outcomes)}

    @cached_property
    def space(self) -> FinSpace:
        return discrete_space(self.outcomes, "Z")

    @property
    def players(self) -> int:
        return len(self.utilities[0]) if self.utilities else 0

    def utility(self, player: int, z) -> Fraction:
        if self.utilities is None:
            raise SpaceError("outcome set carries no utilities")
        return self.utilities[self.index[z]][player]

    def utility_map(self, player: int) -> dict:
        return {z: self.utility(player, z) for z in self.outcomes}


@dataclass(frozen=True, eq=False)
class Act:
    space: FinSpace
    table: tuple
    name: str = ""

    def __post_init__(self):
        table = tuple(self.table)
        if len(table) != len(self.space.points):
            raise SpaceError(f"act has {len(table)} values for {len(self.space.points)} points")
        object.__setattr__(self, "table", table)
        for atom in self.space.atoms:
            if len({table[self.space.index[p]] for p in atom}) > 1:
                raise MeasurabilityError(
                    f"act {self.name or '?'} is not constant on atom {sorted(point_label(p) for p in atom)}"
                )

    @classmethod
    def from_mapping(cls, space: FinSpace, mapping: Mapping, name: str = "") -> Act:
        try:
            return cls(space, tuple(mapping[p] for p in space.points), name)
        except KeyError as e:
            raise SpaceError(f"act {name or '?'} has no value at {point_label(e.args[0])}") from None

    def __call__(self, p: Point):
        return self.table[self.space.index[p]]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Act):
            return NotImplemented
        return self.table == other.table and self.space == other.space

    def __hash__(self) -> int:
        return hash((self.space, self.table))

    def __repr__(self) -> str:
        return f"Act({act_label(self)})"

    def outcome_preimage(self, z) -> frozenset:
        return frozenset(p for p, v in zip(self.space.points, self.table) if v == z)

    def values(self) -> tuple:
        return tuple(dict.fromkeys(self.table))

    def named(self, name: str) -> Act:
        return Act(self.space, self.table, name)


def act_label(f: Act) -> str:
    if f.name:
        return f.name
    return "{" + ", ".join(f"{point_label(p)}:{point_label(z)}" for p, z in zip(f.space.points, f.table)) + "}"


def constant_act(space: FinSpace, z, name: str = "") -> Act:
    return Act(space, (z,) * len(space.points), name)


def pullback(f: Act, phi: MeasurableMap, name: str | None = None) -> Act:
    """F φ: f ↦ f ∘ φ."""
    if phi.codomain != f.space:
        raise SpaceError("pullback: map codomain is not the act's space")
    return Act(phi.domain, tuple(f(phi.table[p]) for p in phi.domain.points), f.name if name is None else name)


def restrict(f: Act, sub: FinSpace) -> Act:
    return pullback(f, inclusion(sub, f.space))


def enumerate_acts(space: FinSpace, outcomes: OutcomeSet | Sequence, cap: int = 4096) -> list[Act]:
    zs = tuple(outcomes)
    count = len(zs) ** len(space.atoms)
    if count > cap:
        raise CapExceededError("act enumeration", count, cap)
    out = []
    for choice in cartesian(zs, repeat=len(space.atoms)):
        by_atom = dict(zip(range(len(space.atoms)), choice))
        out.append(Act(space, tuple(by_atom[space.atom_index[p]] for p in space.points)))
    return out


def sample_acts(space: FinSpace, outcomes: OutcomeSet | Sequence, count: int, rng: random.Random) -> list[Act]:
    zs = tuple(outcomes)
    seen: dict[Act, None] = {}
    for _ in range(count):
        per_atom = [rng.choice(zs) for _ in space.atoms]
        seen.setdefault(Act(space, tuple(per_atom[space.atom_index[p]] for p in space.points)))
    return list(seen)


def auto_witnesses(f: Act, phi: MeasurableMap) -> dict:
    """Smallest event E_z of the codomain containing φ[f^{-1}{z}], per outcome z of f."""
    if phi.domain != f.space:
        raise SpaceError("auto_witnesses: map domain is not the act's space")
    return {z: phi.codomain.close(phi.image(f.outcome_preimage(z))) for z in f.values()}


def factor_through(
    f: Act,
    phi: MeasurableMap,
    witnesses: Mapping,
    outcomes: OutcomeSet | Sequence | None = None,
    name: str | None = None,
) -> Act:
    """Return f′ over φ's codomain with f = f′ ∘ φ.

    Each witness E_z must be an event with f^{-1}{z} = φ^{-1}[E_z]. The E_z need
    not be disjoint outside φ's image; the first witness listing a point wins.
    Points covered by no witness get the first outcome of `outcomes`.
    """
    if phi.domain != f.space:
        raise SpaceError("factor_through: map domain is not the act's space")
    y = phi.codomain
    for z in f.values():
        if z not in witnesses:
            raise WitnessError(f"no witness event for outcome {point_label(z)}")
    for z, event in witnesses.items():
        event = frozenset(event)
        if not y.is_event(event):
            raise WitnessError(f"witness for {point_label(z)} is not an event of the codomain")
        if phi.preimage(event) != f.outcome_preimage(z):
            raise WitnessError(f"witness for {point_label(z)} does not pull back to the outcome's preimage")
    assigned: dict = {}
    for z, event in witnesses.items():
        for p in event:
            assigned.setdefault(p, z)
    uncovered = [p for p in y.points if p not in assigned]
    if uncovered and not outcomes:
        raise SpaceError(f"no outcome set to fill {len(uncovered)} points outside every witness")
    default = tuple(outcomes)[0] if uncovered else None
    g = Act(y, tuple(assigned.get(p, default) for p in y.points), f.name if name is None else name)
    if pullback(g, phi).table != f.table:
        raise WitnessError("factorization check failed")
    return g


class LevelDescent(NamedTuple):
    level: int
    act: Act


def descend_level(f: Act, limit: Limit, outcomes: OutcomeSet | Sequence | None = None) -> LevelDescent:
    """Least level m with f = f′ ∘ ζ_m."""
    if f.space != limit.space:
        raise SpaceError("descend_level: act is not over the limit space")
    for m, zeta in enumerate(limit.projections):
        try:
            return LevelDescent(m, factor_through(f, zeta, auto_witnesses(f, zeta), outcomes))
        except WitnessError:
            continue
    raise WitnessError("act does not descend to any level")
