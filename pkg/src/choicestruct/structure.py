"""Two-player choice structures, preference structures and their morphisms."""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from .act import Act, OutcomeSet, pullback, sample_acts
from .choice import ChoiceFn, all_menus, gamma_map, item_label, menu_label, sample_menus
from .config import SearchBounds
from .criteria import (
    UtilityView,
    eu_choice,
    full_simplex,
    interval_belief,
    lift_to_states,
    maxmin_choice,
    point_belief,
    regret_choice,
)
from .errors import MeasurabilityError, SpaceError
from .game import action_acts, example_game, outcome_set
from .pref import Preorder, maximize_as_choicefn, prel_map
from .space import FinSpace, MeasurableMap, Product, discrete_space, identity_map, inclusion, product, product_map

log = logging.getLogger("choicestruct.structure")


class Player(str, Enum):
    I = "i"
    J = "j"

    @property
    def other(self) -> Player:
        return Player.J if self is Player.I else Player.I

    @property
    def index(self) -> int:
        return 0 if self is Player.I else 1


PLAYERS = (Player.I, Player.J)


@dataclass(frozen=True, eq=False)
class _TwoPlayer:
    actions_i: FinSpace
    actions_j: FinSpace
    types_i: FinSpace
    types_j: FinSpace
    theta_i: Mapping
    theta_j: Mapping
    outcomes: OutcomeSet
    basis_i: tuple = ()
    basis_j: tuple = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "theta_i", dict(self.theta_i))
        object.__setattr__(self, "theta_j", dict(self.theta_j))
        object.__setattr__(self, "basis_i", tuple(self.basis_i))
        object.__setattr__(self, "basis_j", tuple(self.basis_j))
        for p in PLAYERS:
            if not self.actions(p).is_discrete:
                raise SpaceError(f"action space of player {p.value} must be discrete")
            missing = set(self.types(p).points) ^ set(self.theta(p))
            if missing:
                raise SpaceError(f"theta of player {p.value} does not match its types: {sorted(map(str, missing))}")
            for f in self.basis(p):
                if f.space != self.actions(p.other):
                    raise SpaceError(f"basis act {f.name or '?'} of player {p.value} is not over the opponent's actions")
                stray = [z for z in f.table if z not in self.outcomes]
                if stray:
                    raise SpaceError(f"basis act {f.name or '?'} uses unknown outcomes {stray}")

    def actions(self, p: Player) -> FinSpace:
        return self.actions_i if p is Player.I else self.actions_j

    def types(self, p: Player) -> FinSpace:
        return self.types_i if p is Player.I else self.types_j

    def theta(self, p: Player) -> dict:
        return self.theta_i if p is Player.I else self.theta_j

    def basis(self, p: Player) -> tuple:
        return self.basis_i if p is Player.I else self.basis_j

    def states(self, p: Player) -> Product:
        """A_opp × T_opp with its projections."""
        return product(self.actions(p.other), self.types(p.other))

    def basis_acts(self, p: Player) -> tuple:
        """The basis acts as functions of opponent states (constant in the type)."""
        first = self.states(p).first
        return tuple(pullback(f, first) for f in self.basis(p))

    def basis_menus(self, p: Player, max_size: int | None = None) -> list[frozenset]:
        return list(all_menus(self.basis_acts(p), max_size))


class ChoiceStructure(_TwoPlayer):
    def __post_init__(self):
        super().__post_init__()
        for p in PLAYERS:
            for t, c in self.theta(p).items():
                if not isinstance(c, ChoiceFn):
                    raise SpaceError(f"theta({t}) of player {p.value} is not a choice function")
            self.check_measurability(p)

    def check_measurability(self, p: Player, max_size: int = 4) -> None:
        """θ answers on basis menus must be constant on every atom of the type space."""
        space = self.types(p)
        for k in self.basis_menus(p, max_size):
            for atom in space.atoms:
                if len(atom) < 2:
                    continue
                answers = set()
                for t in atom:
                    c = self.theta(p)[t]
                    if c.can_evaluate(k):
                        answers.add(c.evaluate(k))
                if len(answers) > 1:
                    raise MeasurabilityError(
                        f"theta of player {p.value} separates types inside an atom on menu {menu_label(k, self.basis_acts(p))}"
                    )


class PreferenceStructure(_TwoPlayer):
    def __post_init__(self):
        super().__post_init__()
        for p in PLAYERS:
            space = self.states(p).space
            for t, rel in self.theta(p).items():
                if not isinstance(rel, Preorder):
                    raise SpaceError(f"theta({t}) of player {p.value} is not a poset")
                if any(not isinstance(f, Act) or f.space != space for f in rel.carrier):
                    raise SpaceError(f"poset of {t} is not over acts on the opponent states")


@dataclass(frozen=True)
class StructureMorphism:
    alpha_i: MeasurableMap
    alpha_j: MeasurableMap

    def alpha(self, p: Player) -> MeasurableMap:
        return self.alpha_i if p is Player.I else self.alpha_j


def identity_morphism(x: _TwoPlayer) -> StructureMorphism:
    return StructureMorphism(identity_map(x.types_i), identity_map(x.types_j))


class MorphismCheck(NamedTuple):
    ok: bool
    player: Player | None = None
    type: object = None
    menu: frozenset | None = None
    expected: frozenset | None = None
    got: frozenset | None = None


def structure_menus(x: ChoiceStructure, p: Player, bounds: SearchBounds | None = None) -> list[frozenset]:
    """Basis menus plus seeded random menus of random acts, kept when every θ can evaluate them."""
    bounds = bounds or SearchBounds()
    menus = x.basis_menus(p, bounds.menu_cap)
    rng = random.Random(f"{bounds.seed}:{p.value}:structure")
    pool = sample_acts(x.states(p).space, x.outcomes, bounds.samples, rng)
    menus.extend(m for m in sample_menus(pool, bounds.samples, bounds.menu_cap, rng) if m not in menus)
    thetas = list(x.theta(p).values())
    return [k for k in menus if all(c.can_evaluate(k) for c in thetas)]


def check_morphism(
    src: ChoiceStructure,
    dst: ChoiceStructure,
    m: StructureMorphism,
    menus: Mapping | None = None,
    bounds: SearchBounds | None = None,
) -> MorphismCheck:
    """θ′_p ∘ α_p = Γ(id × α_opp) ∘ θ_p for both players, on a menu universe."""
    for p in PLAYERS:
        if src.actions(p) != dst.actions(p):
            raise SpaceError(f"action spaces of player {p.value} differ")
        a = m.alpha(p)
        if a.domain != src.types(p) or a.codomain != dst.types(p):
            raise SpaceError(f"alpha for player {p.value} does not map source types to target types")
    for p in PLAYERS:
        phi = product_map(identity_map(src.actions(p.other)), m.alpha(p.other))
        universe = menus[p] if menus is not None else structure_menus(dst, p, bounds)
        for t in src.types(p).points:
            lhs = dst.theta(p)[m.alpha(p)(t)]
            rhs = gamma_map(src.theta(p)[t], phi)
            for k in universe:
                if not (lhs.can_evaluate(k) and rhs.can_evaluate(k)):
                    continue
                got, expected = rhs.evaluate(k), lhs.evaluate(k)
                if got != expected:
                    log.debug("morphism square fails for %s at %s", t, menu_label(k))
                    return MorphismCheck(False, p, t, k, expected, got)
    return MorphismCheck(True)


def duplicate_type(x: _TwoPlayer, p: Player, t, copy) -> _TwoPlayer:
    """Add `copy` to T_p with θ(copy) = θ(t); the opponent treats the copy's
    states like those of `t`. Works on choice and preference structures."""
    old = x.types(p)
    if t not in old:
        raise SpaceError(f"{t!r} is not a type of player {p.value}")
    if copy in old:
        raise SpaceError(f"{copy!r} is already a type of player {p.value}")
    new = FinSpace(old.points + (copy,), old.atoms + (frozenset([copy]),), old.name)
    theta_p = dict(x.theta(p))
    theta_p[copy] = theta_p[t]
    if isinstance(x, PreferenceStructure):
        fold = MeasurableMap(new, old, {s: (t if s == copy else s) for s in new.points})
        squash = product_map(identity_map(x.actions(p)), fold)
        theta_o = {
            s: prel_map(rel, {pullback(f, squash): f for f in rel.carrier})
            for s, rel in x.theta(p.other).items()
        }
    else:
        widen = product_map(identity_map(x.actions(p)), inclusion(old, new))
        theta_o = {s: gamma_map(c, widen) for s, c in x.theta(p.other).items()}
    fields = dict(
        actions_i=x.actions_i, actions_j=x.actions_j, types_i=x.types_i, types_j=x.types_j,
        theta_i=x.theta_i, theta_j=x.theta_j, outcomes=x.outcomes,
        basis_i=x.basis_i, basis_j=x.basis_j, name=x.name,
    )
    fields[f"types_{p.value}"] = new
    fields[f"theta_{p.value}"] = theta_p
    fields[f"theta_{p.other.value}"] = theta_o
    return type(x)(**fields)


def collapse_morphism(dup: _TwoPlayer, x: _TwoPlayer, p: Player, t, copy) -> StructureMorphism:
    table = {s: (t if s == copy else s) for s in dup.types(p).points}
    collapse = MeasurableMap(dup.types(p), x.types(p), table)
    keep = identity_map(x.types(p.other))
    return StructureMorphism(collapse, keep) if p is Player.I else StructureMorphism(keep, collapse)


def _example(types_j: Sequence[str], name: str) -> ChoiceStructure:
    g = example_game()
    z = outcome_set(g)
    actions_i = discrete_space(g.actions[0], "A_i")
    actions_j = discrete_space(g.actions[1], "A_j")
    types_i = discrete_space(("t_i",), "T_i")
    types_j = discrete_space(tuple(types_j), "T_j")
    u_i, u_j = UtilityView.of(z, 0), UtilityView.of(z, 1)
    regret = regret_choice(lift_to_states("regret", interval_belief(actions_j.points, Fraction(1, 4), 1), types_j.points), u_i)
    maxmin = maxmin_choice(lift_to_states("maxmin", full_simplex(actions_i.points), types_i.points), u_j)
    half = {"u": Fraction(1, 2), "d": Fraction(1, 2)}
    eu = eu_choice(lift_to_states("eu", point_belief(actions_i.points, half), types_i.points), u_j)
    theta_j = {t: (eu if t == "t_EU" else maxmin) for t in types_j.points}
    return ChoiceStructure(
        actions_i, actions_j, types_i, types_j,
        {"t_i": regret}, theta_j, z,
        tuple(action_acts(g, 0)), tuple(action_acts(g, 1)), name,
    )


# Published answers for the regret type t_i that the closed interval does not
# reproduce, keyed by menu act names.
EXAMPLE_REFERENCE_CHOICES = {
    frozenset({"f_u", "f_m", "f_c"}): ("f_u", "f_m"),
    frozenset({"f_u", "f_c", "f_d"}): ("f_u",),
}


def example_reference_choice(x: ChoiceStructure, p: Player, t, menu: frozenset) -> tuple | None:
    if x.name not in ("example", "example-duplicated") or p is not Player.I or t != "t_i":
        return None
    return EXAMPLE_REFERENCE_CHOICES.get(frozenset(f.name for f in menu))


def example_structure() -> ChoiceStructure:
    """Regret-driven i with interval belief P(r) ∈ [1/4, 1]; j is either a maxmin
    type with no information or an EU type with 1/2 on u and 1/2 on d."""
    return _example(("t_Mm", "t_EU"), "example")


def example_structure_duplicated() -> ChoiceStructure:
    """The example with a second maxmin type t_Mm2 for j."""
    return _example(("t_Mm", "t_EU", "t_Mm2"), "example-duplicated")


def embed_preference_structure(x: PreferenceStructure) -> ChoiceStructure:
    """Replace every poset by its maximization choice function."""
    return ChoiceStructure(
        x.actions_i, x.actions_j, x.types_i, x.types_j,
        {t: maximize_as_choicefn(r) for t, r in x.theta_i.items()},
        {t: maximize_as_choicefn(r) for t, r in x.theta_j.items()},
        x.outcomes, x.basis_i, x.basis_j, x.name,
    )


class EmbeddingPair(NamedTuple):
    player: Player
    first: object
    second: object
    menu: frozenset | None
    separated: bool


def embedding_report(x: PreferenceStructure, bounds: SearchBounds | None = None) -> list[EmbeddingPair]:
    """For each pair of types with distinct posets: a menu on which the embedded
    choice functions differ, and whether refinement of the embedded structure
    separates the pair."""
    from .hierarchy import refine_partition

    embedded = embed_preference_structure(x)
    blocks = refine_partition(embedded, bounds or SearchBounds())
    out = []
    for p in PLAYERS:
        types = x.types(p).points
        for k, s in enumerate(types):
            for t in types[k + 1:]:
                if x.theta(p)[s] == x.theta(p)[t]:
                    continue
                carrier = sorted({*x.theta(p)[s].carrier, *x.theta(p)[t].carrier}, key=item_label)
                a, b = embedded.theta(p)[s], embedded.theta(p)[t]
                menu = next(
                    (m for m in all_menus(carrier) if a.can_evaluate(m) and b.can_evaluate(m) and a(m) != b(m)),
                    None,
                )
                out.append(EmbeddingPair(p, s, t, menu, not blocks.together(p, s, t)))
    return out
