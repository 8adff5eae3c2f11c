"""YAML spec files for games and choice/preference structures.

Numbers are exact: YAML integers or "a/b" strings. Floats and decimal strings
are rejected. Diagnostics carry the line of the offending node.
"""
from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import yaml
from rapidfuzz import fuzz, process

from .act import Act, OutcomeSet, pullback
from .choice import TableChoice
from .config import GRID, default_families
from .criteria import CredalSet, UtilityView, criterion_choice, full_simplex, interval_belief, lift_to_states, point_belief
from .errors import BeliefError, ChoiceStructError, ContractionError, RelationError, SpaceError, SpecError
from .game import BeliefFamily, Criterion, CriterionSpec, GameSpec
from .pref import poset_from_pairs
from .space import discrete_space, product, space_from_blocks
from .structure import PLAYERS, ChoiceStructure, Player, PreferenceStructure

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


def _line_index(text: str) -> dict[tuple, int]:
    out: dict[tuple, int] = {}

    def walk(node: yaml.Node, path: tuple) -> None:
        out[path] = node.start_mark.line + 1
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                walk(v, path + (k.value,))
        elif isinstance(node, yaml.SequenceNode):
            for i, v in enumerate(node.value):
                walk(v, path + (i,))

    root = yaml.compose(text)
    if root is not None:
        walk(root, ())
    return out


def did_you_mean(name: Any, choices: Sequence) -> str:
    labels = [str(c) for c in choices]
    if not labels:
        return ""
    hits = process.extract(str(name), labels, scorer=fuzz.WRatio, limit=1)
    if hits and hits[0][1] >= 60:
        return f" (did you mean {hits[0][0]!r}?)"
    return ""


class _Doc:
    def __init__(self, text: str):
        try:
            self.data = yaml.safe_load(text)
            self.lines = _line_index(text)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            raise SpecError(f"not valid YAML: {getattr(e, 'problem', e)}", line=mark.line + 1 if mark else None) from None
        if not isinstance(self.data, dict):
            raise SpecError("spec file must be a mapping at top level", line=1)

    def error(self, message: str, *path) -> SpecError:
        line = None
        for cut in range(len(path), -1, -1):
            line = self.lines.get(tuple(path[:cut]))
            if line is not None:
                break
        return SpecError(message, field=".".join(str(p) for p in path) or None, line=line)

    def get(self, *path, required: bool = True, default=None):
        node = self.data
        for key in path:
            if isinstance(node, dict) and key in node:
                node = node[key]
            elif isinstance(node, list) and isinstance(key, int) and key < len(node):
                node = node[key]
            elif required:
                raise self.error("missing required field", *path)
            else:
                return default
        return node

    def mapping(self, *path, required: bool = True) -> dict:
        node = self.get(*path, required=required, default={})
        if not isinstance(node, dict):
            raise self.error("expected a mapping", *path)
        return node

    def sequence(self, *path, required: bool = True) -> list:
        node = self.get(*path, required=required, default=[])
        if not isinstance(node, list):
            raise self.error("expected a list", *path)
        return node

    def rational(self, value: Any, *path) -> Fraction:
        if isinstance(value, bool):
            raise self.error(f"{value!r} is not a number", *path)
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str) and _RATIONAL.match(value):
            try:
                return Fraction(value.replace(" ", ""))
            except ZeroDivisionError:
                raise self.error(f"{value!r} has a zero denominator", *path) from None
        raise self.error(f"{value!r} is not an exact rational; write an integer or a/b", *path)

    def name_in(self, value: Any, choices: Sequence, what: str, *path):
        if value not in choices:
            raise self.error(f"unknown {what} {value!r}{did_you_mean(value, choices)}", *path)
        return value


def _kind(doc: _Doc) -> str:
    kind = doc.get("kind")
    known = ("game", "choice_structure", "preference_structure")
    if kind not in known:
        raise doc.error(f"unknown kind {kind!r}{did_you_mean(kind, known)}", "kind")
    return kind


def _names(doc: _Doc, *path) -> tuple:
    items = doc.sequence(*path)
    if not items:
        raise doc.error("list is empty", *path)
    names = tuple(str(x) for x in items)
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise doc.error(f"duplicate names {dupes}", *path)
    return names


def _payoff_cell(doc: _Doc, cell: Any, *path) -> tuple:
    if isinstance(cell, str) and ";" in cell:
        parts = cell.split(";")
    elif isinstance(cell, list):
        parts = cell
    else:
        raise doc.error(f"payoff cell {cell!r} must be 'a;b' or a two-element list", *path)
    if len(parts) != 2:
        raise doc.error(f"payoff cell {cell!r} needs exactly two entries", *path)
    return tuple(doc.rational(p.strip() if isinstance(p, str) else p, *path) for p in parts)


def _criterion_spec(doc: _Doc, *path, grid: int | None = None) -> CriterionSpec:
    doc.mapping(*path)
    name = doc.get(*path, "name")
    known = [c.value for c in Criterion]
    doc.name_in(name, known, "criterion", *path, "name")
    entries = doc.sequence(*path, "families", required=False)
    if not entries:
        return CriterionSpec(Criterion(name), default_families(name, grid))
    families = []
    for k, entry in enumerate(entries):
        where = (*path, "families", k)
        if not isinstance(entry, dict) or "kind" not in entry:
            raise doc.error("belief family needs a kind", *where)
        try:
            families.append(BeliefFamily(entry["kind"], int(entry.get("n", grid or GRID)), int(entry.get("max_vertices", 3))))
        except (ValueError, BeliefError) as e:
            raise doc.error(str(e), *where) from None
    return CriterionSpec(Criterion(name), tuple(families))


def parse_game_spec(text: str, grid: int | None = None) -> GameSpec:
    """`grid` sets the resolution of default belief families for criteria that list none."""
    doc = _Doc(text)
    if _kind(doc) != "game":
        raise doc.error("expected kind: game", "kind")
    players = _names(doc, "players")
    if len(players) != 2:
        raise doc.error(f"a game needs exactly two players, got {len(players)}", "players")
    actions = tuple(_names(doc, "actions", p) for p in players)
    rows = doc.sequence("payoffs")
    if len(rows) != len(actions[0]):
        raise doc.error(f"{len(rows)} payoff rows for {len(actions[0])} actions of {players[0]}", "payoffs")
    payoffs = {}
    for r, (a, row) in enumerate(zip(actions[0], rows)):
        if not isinstance(row, list) or len(row) != len(actions[1]):
            got = len(row) if isinstance(row, list) else "no"
            raise doc.error(f"row {r + 1} ({a}) has {got} cells, expected {len(actions[1])}", "payoffs", r)
        for c, (b, cell) in enumerate(zip(actions[1], row)):
            payoffs[(a, b)] = _payoff_cell(doc, cell, "payoffs", r, c)
    criteria = ()
    if doc.get("criteria", required=False) is not None:
        criteria = tuple(_criterion_spec(doc, "criteria", p, grid=grid) for p in players)
    try:
        return GameSpec(players, actions, payoffs, criteria)
    except ChoiceStructError as e:
        raise doc.error(str(e)) from None


def _outcomes(doc: _Doc) -> OutcomeSet:
    ids, utilities = [], []
    for k, entry in enumerate(doc.sequence("outcomes")):
        if not isinstance(entry, dict) or "id" not in entry:
            raise doc.error("outcome needs an id", "outcomes", k)
        ids.append(str(entry["id"]))
        if "utility" in entry:
            values = doc.sequence("outcomes", k, "utility")
            utilities.append(tuple(doc.rational(v, "outcomes", k, "utility", n) for n, v in enumerate(values)))
    if utilities and len(utilities) != len(ids):
        raise doc.error("either every outcome has a utility vector or none does", "outcomes")
    try:
        return OutcomeSet(tuple(ids), tuple(utilities) if utilities else None)
    except SpaceError as e:
        raise doc.error(str(e), "outcomes") from None


def _type_space(doc: _Doc, p: str):
    names = _names(doc, "types", p)
    atoms = doc.sequence("type_atoms", p, required=False)
    if not atoms:
        return discrete_space(names, f"T_{p}")
    blocks = [tuple(str(t) for t in block) for block in atoms]
    if sorted(t for b in blocks for t in b) != sorted(names):
        raise doc.error("type atoms must partition the types", "type_atoms", p)
    return space_from_blocks(blocks, f"T_{p}")


def _basis(doc: _Doc, p: Player, opp_actions, outcomes: OutcomeSet) -> tuple:
    acts = []
    for name, table in doc.mapping("basis", p.value).items():
        where = ("basis", p.value, name)
        if not isinstance(table, dict):
            raise doc.error("basis act must map opponent actions to outcomes", *where)
        for a, z in table.items():
            doc.name_in(str(a), opp_actions.points, "action", *where, a)
            doc.name_in(str(z), outcomes.outcomes, "outcome", *where, a)
        missing = [a for a in opp_actions.points if a not in {str(k) for k in table}]
        if missing:
            raise doc.error(f"no outcome for actions {missing}", *where)
        acts.append(Act.from_mapping(opp_actions, {str(a): str(z) for a, z in table.items()}, str(name)))
    return tuple(acts)


def _state_key(doc: _Doc, key: Any, actions: tuple, types: tuple, *where):
    """`a` names an opponent action, `a@t` an opponent state."""
    name = str(key)
    if "@" not in name:
        return doc.name_in(name, actions, "action", *where)
    a, _, t = name.partition("@")
    return doc.name_in(a, actions, "action", *where), doc.name_in(t, types, "type", *where)


def _keyed_support(doc: _Doc, keys: list, actions: tuple, types: tuple, *path) -> tuple:
    kinds = {isinstance(k, tuple) for k in keys}
    if len(kinds) > 1:
        raise doc.error("belief mixes action keys with action@type keys", *path)
    if kinds == {True}:
        return tuple((a, t) for a in actions for t in types)
    return actions


def _belief(doc: _Doc, actions: tuple, types: tuple, *path) -> CredalSet:
    """A belief over opponent actions, or over opponent states when keyed by `a@t`."""
    node = doc.get(*path)
    try:
        if node == "full_simplex":
            return full_simplex(actions)
        if isinstance(node, dict) and "point" in node:
            probs = {
                _state_key(doc, a, actions, types, *path, "point", a): doc.rational(v, *path, "point", a)
                for a, v in doc.mapping(*path, "point").items()
            }
            return point_belief(_keyed_support(doc, list(probs), actions, types, *path, "point"), probs)
        if isinstance(node, dict) and "interval" in node:
            lo = doc.rational(doc.get(*path, "interval", "lower"), *path, "interval", "lower")
            hi = doc.rational(doc.get(*path, "interval", "upper"), *path, "interval", "upper")
            return interval_belief(actions, lo, hi)
        if isinstance(node, dict) and "vertices" in node:
            rows = []
            for k, v in enumerate(doc.sequence(*path, "vertices")):
                where = (*path, "vertices", k)
                if not isinstance(v, dict):
                    raise doc.error("vertex must map actions or action@type states to probabilities", *where)
                rows.append({_state_key(doc, a, actions, types, *where, a): doc.rational(x, *where, a) for a, x in v.items()})
            support = _keyed_support(doc, [s for row in rows for s in row], actions, types, *path, "vertices")
            return CredalSet(support, tuple(tuple(row.get(s, 0) for s in support) for row in rows))
    except BeliefError as e:
        raise doc.error(str(e), *path) from None
    raise doc.error("belief must be full_simplex or have point, interval or vertices", *path)


def _basis_lookup(doc: _Doc, acts: Sequence, names: Any, *path) -> frozenset:
    by_name = {f.name: f for f in acts}
    if not isinstance(names, list):
        raise doc.error("expected a list of act names", *path)
    return frozenset(by_name[doc.name_in(str(n), list(by_name), "act", *path, k)] for k, n in enumerate(names))


def _theta_entry(doc: _Doc, x_parts: dict, p: Player, t: str, preference: bool):
    where = ("theta", p.value, t)
    node = doc.mapping(*where)
    acts = x_parts["state_acts"][p]
    if "poset" in node:
        by_name = {f.name: f for f in acts}
        pairs = []
        for k, pair in enumerate(doc.sequence(*where, "poset")):
            if not isinstance(pair, list) or len(pair) != 2:
                raise doc.error("poset entries are [lower, upper] pairs", *where, "poset", k)
            pairs.append(tuple(by_name[doc.name_in(str(n), list(by_name), "act", *where, "poset", k)] for n in pair))
        try:
            return poset_from_pairs(acts, pairs)
        except RelationError as e:
            raise doc.error(str(e), *where, "poset") from None
    if preference:
        raise doc.error("a preference structure needs a poset for every type", *where)
    if "table" in node:
        table = {}
        for k, row in enumerate(doc.sequence(*where, "table")):
            menu = _basis_lookup(doc, acts, doc.get(*where, "table", k, "menu"), *where, "table", k, "menu")
            answer = _basis_lookup(doc, acts, doc.get(*where, "table", k, "choice"), *where, "table", k, "choice")
            table[menu] = answer
        try:
            return TableChoice(table, label=t)
        except ContractionError as e:
            raise doc.error(str(e), *where, "table") from None
    if "criterion" in node:
        name = doc.name_in(node["criterion"], [c.value for c in Criterion], "criterion", *where, "criterion")
        outcomes: OutcomeSet = x_parts["outcomes"]
        if outcomes.utilities is None:
            raise doc.error("criterion types need outcome utilities", *where)
        opp = p.other
        types = x_parts["types"][opp].points
        belief = lift_to_states(name, _belief(doc, x_parts["actions"][opp].points, types, *where, "belief"), types)
        try:
            return criterion_choice(name, belief, UtilityView.of(outcomes, p.index))
        except BeliefError as e:
            raise doc.error(str(e), *where) from None
    raise doc.error("theta entry needs criterion, table or poset", *where)


def parse_structure_spec(text: str) -> ChoiceStructure | PreferenceStructure:
    doc = _Doc(text)
    kind = _kind(doc)
    if kind == "game":
        raise doc.error("expected a structure kind, got game", "kind")
    preference = kind == "preference_structure"
    outcomes = _outcomes(doc)
    actions = {p: discrete_space(_names(doc, "actions", p.value), f"A_{p.value}") for p in PLAYERS}
    types = {p: _type_space(doc, p.value) for p in PLAYERS}
    try:
        basis = {p: _basis(doc, p, actions[p.other], outcomes) for p in PLAYERS}
    except SpaceError as e:
        raise doc.error(str(e), "basis") from None
    state_acts = {}
    for p in PLAYERS:
        first = product(actions[p.other], types[p.other]).first
        state_acts[p] = tuple(pullback(f, first) for f in basis[p])
    parts = {"outcomes": outcomes, "actions": actions, "types": types, "state_acts": state_acts}
    theta = {}
    for p in PLAYERS:
        declared = doc.mapping("theta", p.value)
        for t in declared:
            doc.name_in(str(t), types[p].points, "type", "theta", p.value, t)
        missing = [t for t in types[p].points if t not in {str(k) for k in declared}]
        if missing:
            raise doc.error(f"no theta for types {missing}", "theta", p.value)
        theta[p] = {str(t): _theta_entry(doc, parts, p, str(t), preference) for t in declared}
    cls = PreferenceStructure if preference else ChoiceStructure
    try:
        return cls(
            actions[Player.I], actions[Player.J], types[Player.I], types[Player.J],
            theta[Player.I], theta[Player.J], outcomes,
            basis[Player.I], basis[Player.J], str(doc.get("name", required=False, default="")),
        )
    except ChoiceStructError as e:
        raise doc.error(str(e), "theta") from None


def load_spec(path: Path, grid: int | None = None) -> GameSpec | ChoiceStructure | PreferenceStructure:
    """Dispatch on the file's `kind`."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SpecError(f"cannot read {path}: {e.strerror}") from None
    head = _Doc(text)
    if _kind(head) == "game":
        return parse_game_spec(text, grid)
    return parse_structure_spec(text)

