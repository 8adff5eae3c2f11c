"""Finite uncertainty spaces.

A finite algebra of events is the same thing as a partition of the carrier into
atoms, so a FinSpace stores the atoms and an event is any union of atoms. Chains
and cochains are finite truncations; the colimit of a chain and the limit of a
cochain are computed at the top level N.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import CapExceededError, MeasurabilityError, SpaceError

Point = Hashable

MAX_EVENT_ATOMS = 16


def point_label(p: Any) -> str:
    if isinstance(p, tuple):
        return "(" + ",".join(point_label(q) for q in p) + ")"
    return str(p)


@dataclass(frozen=True, eq=False)
class FinSpace:
    points: tuple
    atoms: tuple
    name: str = ""

    def __post_init__(self):
        points = tuple(self.points)
        if not points:
            raise SpaceError(f"space {self.name!r} has an empty carrier")
        if len(set(points)) != len(points):
            dups = sorted({point_label(p) for p in points if points.count(p) > 1})
            raise SpaceError(f"space {self.name!r} has duplicate points: {dups}")
        index = {p: i for i, p in enumerate(points)}
        seen: set = set()
        atoms = []
        for raw in self.atoms:
            atom = frozenset(raw)
            if not atom:
                raise SpaceError(f"space {self.name!r} has an empty atom")
            foreign = [p for p in atom if p not in index]
            if foreign:
                raise SpaceError(f"atom contains points outside the carrier: {[point_label(p) for p in foreign]}")
            if atom & seen:
                raise SpaceError(f"atoms overlap on {[point_label(p) for p in atom & seen]}")
            seen |= atom
            atoms.append(atom)
        if len(seen) != len(points):
            missing = [point_label(p) for p in points if p not in seen]
            raise SpaceError(f"atoms do not cover {missing}")
        atoms.sort(key=lambda a: min(index[p] for p in a))
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "atoms", tuple(atoms))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinSpace):
            return NotImplemented
        return self.points == other.points and self.atoms == other.atoms

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.points, self.atoms))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator:
        return iter(self.points)

    def __contains__(self, p: object) -> bool:
        return p in self.index

    def __repr__(self) -> str:
        label = f"{self.name!r}, " if self.name else ""
        return f"FinSpace({label}{len(self.points)} points, {len(self.atoms)} atoms)"

    @cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def atom_index(self) -> dict:
        return {p: k for k, atom in enumerate(self.atoms) for p in atom}

    @property
    def is_discrete(self) -> bool:
        return len(self.atoms) == len(self.points)

    def atom_of(self, p: Point) -> frozenset:
        return self.atoms[self.atom_index[p]]

    def sort(self, items: Iterable) -> tuple:
        return tuple(sorted(items, key=self.index.__getitem__))

    def is_event(self, subset: Iterable) -> bool:
        s = frozenset(subset)
        if any(p not in self.index for p in s):
            return False
        return all(atom <= s or not (atom & s) for atom in self.atoms)

    def close(self, subset: Iterable) -> frozenset:
        """Smallest event containing `subset`."""
        s = frozenset(subset)
        return frozenset().union(*(a for a in self.atoms if a & s))

    def events(self, max_atoms: int = MAX_EVENT_ATOMS) -> Iterator[frozenset]:
        if len(self.atoms) > max_atoms:
            raise CapExceededError("event enumeration (atoms)", len(self.atoms), max_atoms)
        for mask in range(1 << len(self.atoms)):
            yield frozenset().union(*(a for k, a in enumerate(self.atoms) if mask >> k & 1))


def discrete_space(points: Sequence, name: str = "") -> FinSpace:
    return FinSpace(tuple(points), tuple(frozenset([p]) for p in points), name)


def space_from_blocks(blocks: Sequence[Sequence], name: str = "") -> FinSpace:
    points = tuple(p for block in blocks for p in block)
    return FinSpace(points, tuple(frozenset(b) for b in blocks), name)


def image_space(values: Iterable, name: str = "") -> FinSpace:
    return discrete_space(tuple(dict.fromkeys(values)), name)


def is_measurable(f: Mapping | Callable, domain: FinSpace, codomain: FinSpace) -> bool:
    """True iff every event of `codomain` pulls back to an event of `domain`.

    With finite algebras this reduces to: each domain atom lands inside a
    single codomain atom.
    """
    apply = f.__getitem__ if isinstance(f, Mapping) else f
    for atom in domain.atoms:
        targets = set()
        for p in atom:
            q = apply(p)
            if q not in codomain:
                return False
            targets.add(codomain.atom_index[q])
        if len(targets) > 1:
            return False
    return True


@dataclass(frozen=True, eq=False)
class MeasurableMap:
    domain: FinSpace
    codomain: FinSpace
    table: Mapping = field(repr=False)

    def __post_init__(self):
        table = {}
        for p in self.domain.points:
            try:
                q = self.table[p]
            except KeyError:
                raise SpaceError(f"map is not total: no image for {point_label(p)}") from None
            if q not in self.codomain:
                raise SpaceError(f"image {point_label(q)} of {point_label(p)} is outside the codomain")
            table[p] = q
        object.__setattr__(self, "table", table)
        if not is_measurable(table, self.domain, self.codomain):
            raise MeasurabilityError(
                f"map {self.domain.name or 'X'} -> {self.codomain.name or 'Y'} is not measurable"
            )

    def __call__(self, p: Point) -> Point:
        return self.table[p]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, MeasurableMap):
            return NotImplemented
        return self.domain == other.domain and self.codomain == other.codomain and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, tuple(self.table[p] for p in self.domain.points)))

    def preimage(self, subset: Iterable) -> frozenset:
        s = frozenset(subset)
        return frozenset(p for p in self.domain.points if self.table[p] in s)

    def image(self, subset: Iterable | None = None) -> frozenset:
        src = self.domain.points if subset is None else subset
        return frozenset(self.table[p] for p in src)

    @property
    def is_injective(self) -> bool:
        return len(set(self.table.values())) == len(self.table)

    @property
    def is_surjective(self) -> bool:
        return set(self.table.values()) == set(self.codomain.points)


def identity_map(x: FinSpace) -> MeasurableMap:
    return MeasurableMap(x, x, {p: p for p in x.points})


def compose(g: MeasurableMap, f: MeasurableMap) -> MeasurableMap:
    """g ∘ f."""
    if f.codomain != g.domain:
        raise SpaceError("cannot compose: codomain of the first map is not the domain of the second")
    return MeasurableMap(f.domain, g.codomain, {p: g.table[f.table[p]] for p in f.domain.points})


def inclusion(sub: FinSpace, x: FinSpace) -> MeasurableMap:
    return MeasurableMap(sub, x, {p: p for p in sub.points})


def restrict_map(phi: MeasurableMap, sub: FinSpace) -> MeasurableMap:
    return compose(phi, inclusion(sub, phi.domain))


class Product(NamedTuple):
    space: FinSpace
    first: MeasurableMap
    second: MeasurableMap


def product(x: FinSpace, y: FinSpace) -> Product:
    points = tuple((a, b) for a in x.points for b in y.points)
    atoms = tuple(frozenset((a, b) for a in ax for b in by) for ax in x.atoms for by in y.atoms)
    name = f"{x.name}×{y.name}" if x.name and y.name else ""
    space = FinSpace(points, atoms, name)
    first = MeasurableMap(space, x, {p: p[0] for p in points})
    second = MeasurableMap(space, y, {p: p[1] for p in points})
    return Product(space, first, second)


def product_map(f: MeasurableMap, g: MeasurableMap) -> MeasurableMap:
    """f × g between the product spaces of the domains and of the codomains."""
    dom = product(f.domain, g.domain).space
    cod = product(f.codomain, g.codomain).space
    return MeasurableMap(dom, cod, {(a, b): (f.table[a], g.table[b]) for a, b in dom.points})


@dataclass(frozen=True)
class FinCochain:
    levels: tuple
    links: tuple

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "links", tuple(self.links))
        if not self.levels:
            raise SpaceError("a cochain needs at least one level")
        if len(self.links) != len(self.levels) - 1:
            raise SpaceError(f"{len(self.levels)} levels need {len(self.levels) - 1} links, got {len(self.links)}")
        for n, link in enumerate(self.links):
            if link.domain != self.levels[n + 1] or link.codomain != self.levels[n]:
                raise SpaceError(f"link {n} does not map level {n + 1} to level {n}")

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def down(self, x: Point, start: int, stop: int) -> Point:
        """Apply ξ_{stop} ∘ … ∘ ξ_{start-1} to a point of level `start`."""
        for n in range(start - 1, stop - 1, -1):
            x = self.links[n].table[x]
        return x


class Limit(NamedTuple):
    space: FinSpace
    projections: tuple


def cochain_limit(cochain: FinCochain) -> Limit:
    """Coherent sequences (x_0, …, x_N); each is determined by x_N.

    The algebra is the one generated by all ζ_n^{-1}[E]: the common refinement of
    the pulled-back atom partitions of every level.
    """
    top = cochain.top
    seqs = tuple(
        tuple(cochain.down(x, top, n) for n in range(top + 1))
        for x in cochain.levels[top].points
    )
    blocks: dict[tuple, list] = {}
    for seq in seqs:
        key = tuple(cochain.levels[n].atom_index[seq[n]] for n in range(top + 1))
        blocks.setdefault(key, []).append(seq)
    space = FinSpace(seqs, tuple(frozenset(b) for b in blocks.values()), "lim")
    projections = tuple(
        MeasurableMap(space, cochain.levels[n], {s: s[n] for s in seqs}) for n in range(top + 1)
    )
    return Limit(space, projections)


class Colimit(NamedTuple):
    points: tuple
    injections: tuple
    classes: dict


def chain_colimit(levels: Sequence[Sequence], maps: Sequence[Mapping]) -> Colimit:
    """Quotient of the disjoint union of X_0..X_N by agreement of images at level N.

    Classes are named by their level-N element; ι_n = ι_{n+1} ∘ f_n.
    """
    levels = [tuple(level) for level in levels]
    if not levels:
        raise SpaceError("a chain needs at least one level")
    if len(maps) != len(levels) - 1:
        raise SpaceError(f"{len(levels)} levels need {len(levels) - 1} maps, got {len(maps)}")
    for n, f in enumerate(maps):
        for x in levels[n]:
            if x not in f:
                raise SpaceError(f"chain map {n} is not total: no image for {point_label(x)}")
            if f[x] not in levels[n + 1]:
                raise SpaceError(f"chain map {n} sends {point_label(x)} outside level {n + 1}")
    top = len(levels) - 1
    injections: list[dict] = [dict()] * (top + 1)
    injections[top] = {x: x for x in levels[top]}
    for n in range(top - 1, -1, -1):
        nxt = injections[n + 1]
        injections[n] = {x: nxt[maps[n][x]] for x in levels[n]}
    classes: dict = {x: [] for x in levels[top]}
    for n, level in enumerate(levels):
        for x in level:
            classes[injections[n][x]].append((n, x))
    return Colimit(levels[top], tuple(injections), {k: tuple(v) for k, v in classes.items()})
