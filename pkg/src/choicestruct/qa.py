"""Acceptance suite behind `cstruct verify`.

Each check returns a CheckResult; a failing check carries its first
counterexample and never stops the rest of the suite.
"""
from __future__ import annotations

import logging
import random
from pathlib import Path
from typing import Callable, NamedTuple

from .act import Act, auto_witnesses, enumerate_acts, factor_through, pullback
from .choice import (
    all_menus,
    colimit_choice,
    first_disagreement,
    gamma_map,
    lift_along_injection,
    menu_label,
    random_choice_fn,
    relabel,
)
from .config import SearchBounds
from .errors import ChoiceStructError, CompatibilityError
from .game import rationalize
from .hierarchy import VerdictKind, coherence_check, hierarchy_map, non_redundancy_verdict, refine_partition, with_override
from .pref import (
    enumerate_posets,
    enumerate_preorders,
    maximal_subset_formula,
    maximize,
    maximize_as_choicefn,
    normalize_preorder,
    prel_preorder,
    random_poset,
)
from .space import FinSpace, MeasurableMap, compose, discrete_space, identity_map
from .specfile import load_spec
from .structure import Player

log = logging.getLogger("choicestruct.qa")

LAW_INSTANCES = 200
NATURALITY_INSTANCES = 100
CONSTRUCTION_INSTANCES = 100
COLIMIT_CHAINS = 50

# regret type of i on the four action acts; the two remaining menus tie (see tie notes)
EXAMPLE_TABLE = {
    ("f_u", "f_m", "f_c", "f_d"): ("f_u", "f_m", "f_c"),
    ("f_u", "f_m", "f_d"): ("f_u", "f_m"),
    ("f_m", "f_c", "f_d"): ("f_c",),
    ("f_m", "f_d"): ("f_d",),
    ("f_c", "f_d"): ("f_c",),
    ("f_u", "f_m"): ("f_u",),
    ("f_u", "f_d"): ("f_u",),
    ("f_u", "f_c"): ("f_u", "f_c"),
    ("f_m", "f_c"): ("f_c",),
}

GAME_SURVIVORS = {
    "game_eu.yaml": "i: u | j: l",
    "game_maxmin.yaml": "i: u,c,d | j: l,r",
    "game_regret.yaml": "i: u | j: l",
}


class CheckResult(NamedTuple):
    name: str
    ok: bool
    detail: str = ""
    counterexample: str = ""


def _space(rng: random.Random, tag: str, lo: int = 1, hi: int = 3) -> FinSpace:
    return discrete_space(tuple(f"{tag}{k}" for k in range(rng.randint(lo, hi))), tag.upper())


def _random_map(rng: random.Random, x: FinSpace, y: FinSpace) -> MeasurableMap:
    return MeasurableMap(x, y, {p: rng.choice(y.points) for p in x.points})


def _act_choice(rng: random.Random, x: FinSpace, outcomes: tuple):
    acts = enumerate_acts(x, outcomes)
    return acts, random_choice_fn(acts, rng)


def check_example_tables(fixtures_dir: Path) -> CheckResult:
    x = load_spec(fixtures_dir / "example.yaml")
    acts_i = {f.name: f for f in x.basis_acts(Player.I)}
    c_i = x.theta(Player.I)["t_i"]
    for menu, want in EXAMPLE_TABLE.items():
        got = c_i.evaluate(frozenset(acts_i[a] for a in menu))
        if got != frozenset(acts_i[a] for a in want):
            return CheckResult("example tables", False, "regret type of i", f"{{{','.join(menu)}}} -> {menu_label(got)}")
    acts_j = {f.name: f for f in x.basis_acts(Player.J)}
    pair = frozenset(acts_j.values())
    for t, want in (("t_Mm", {"f_l"}), ("t_EU", {"f_l", "f_r"})):
        got = x.theta(Player.J)[t].evaluate(pair)
        if got != frozenset(acts_j[a] for a in want):
            return CheckResult("example tables", False, f"{t} of j", f"{{f_l,f_r}} -> {menu_label(got)}")
    return CheckResult("example tables", True, f"{len(EXAMPLE_TABLE) + 2} menus")


def check_rationalization(fixtures_dir: Path) -> CheckResult:
    for name, want in GAME_SURVIVORS.items():
        got = rationalize(load_spec(fixtures_dir / name)).survivors_line()
        if got != want:
            return CheckResult("rationalizability", False, name, got)
    return CheckResult("rationalizability", True, f"{len(GAME_SURVIVORS)} games")


def check_nonredundancy(fixtures_dir: Path, bounds: SearchBounds) -> CheckResult:
    x = load_spec(fixtures_dir / "example.yaml")
    part = refine_partition(x, bounds)
    verdict = non_redundancy_verdict(part)
    if verdict.kind is not VerdictKind.NON_REDUNDANT:
        return CheckResult("non-redundancy", False, "example", verdict.kind.value)
    labels = {menu_label(s.menu, x.basis_acts(s.player)) for s in part.separators}
    if "{f_l,f_r}" not in labels:
        return CheckResult("non-redundancy", False, "example separator", ", ".join(sorted(labels)))
    dup = load_spec(fixtures_dir / "example_duplicated.yaml")
    verdict = non_redundancy_verdict(refine_partition(dup, bounds))
    pairs = {(p, s, t) for p, s, t in verdict.witnesses}
    if verdict.kind is not VerdictKind.REDUNDANT or (Player.J, "t_Mm", "t_Mm2") not in pairs:
        return CheckResult("non-redundancy", False, "duplicated example", verdict.kind.value)
    return CheckResult("non-redundancy", True, "example and duplicated example")


def _law(name: str, count: int, instance: Callable[[random.Random], str | None], seed: int) -> CheckResult:
    rng = random.Random(f"{seed}:{name}")
    for k in range(count):
        bad = instance(rng)
        if bad:
            return CheckResult(name, False, f"instance {k}", bad)
    return CheckResult(name, True, f"{count} instances")


def _relabel_law(rng: random.Random) -> str | None:
    x, y, z = _space(rng, "x", 1, 4), _space(rng, "y", 1, 4), _space(rng, "z", 1, 5)
    f, g = _random_map(rng, x, y), _random_map(rng, y, z)
    c = random_choice_fn(z.points, rng)
    ident = relabel(c, identity_map(z))
    bad = first_disagreement(ident, c, all_menus(z.points))
    if bad is not None:
        return f"identity on {menu_label(bad)}"
    bad = first_disagreement(relabel(relabel(c, g), f), relabel(c, compose(g, f)), all_menus(x.points))
    return f"composition on {menu_label(bad)}" if bad is not None else None


def _pullback_law(rng: random.Random) -> str | None:
    x, y, w = _space(rng, "x"), _space(rng, "y"), _space(rng, "w")
    f, g = _random_map(rng, x, y), _random_map(rng, y, w)
    a = Act(w, tuple(rng.choice("abc") for _ in w.points))
    if pullback(a, identity_map(w)) != a:
        return "identity"
    if pullback(pullback(a, g), f) != pullback(a, compose(g, f)):
        return "composition"
    return None


def _gamma_law(rng: random.Random) -> str | None:
    zs = ("a", "b")
    x, y, w = _space(rng, "x", 1, 2), _space(rng, "y", 1, 2), _space(rng, "w", 1, 2)
    f, g = _random_map(rng, x, y), _random_map(rng, y, w)
    _, c = _act_choice(rng, x, zs)
    menus_x = list(all_menus(enumerate_acts(x, zs)))
    bad = first_disagreement(gamma_map(c, identity_map(x)), c, menus_x)
    if bad is not None:
        return f"identity on {menu_label(bad)}"
    menus_w = list(all_menus(enumerate_acts(w, zs)))
    bad = first_disagreement(gamma_map(gamma_map(c, f), g), gamma_map(c, compose(g, f)), menus_w)
    return f"composition on {menu_label(bad)}" if bad is not None else None


def _prel_law(rng: random.Random) -> str | None:
    x, y, z = _space(rng, "x", 1, 4), _space(rng, "y", 1, 4), _space(rng, "z", 1, 5)
    f, g = _random_map(rng, x, y), _random_map(rng, y, z)
    p = random_poset(z.points, rng)
    if prel_preorder(p, identity_map(z)) != p:
        return "identity"
    if prel_preorder(prel_preorder(p, g), f) != prel_preorder(p, compose(g, f)):
        return "composition"
    return None


def check_functor_laws(seed: int) -> list[CheckResult]:
    return [
        _law("relabel laws", LAW_INSTANCES, _relabel_law, seed),
        _law("pullback laws", LAW_INSTANCES, _pullback_law, seed),
        _law("gamma_map laws", LAW_INSTANCES, _gamma_law, seed),
        _law("prel laws", LAW_INSTANCES, _prel_law, seed),
    ]


def _naturality(rng: random.Random) -> str | None:
    zs = ("a", "b", "c")[: rng.randint(1, 3)]
    x, y = _space(rng, "x", 1, 2), _space(rng, "y", 1, 2)
    phi = _random_map(rng, x, y)
    acts_x, acts_y = enumerate_acts(x, zs), enumerate_acts(y, zs)
    p = random_poset(acts_x, rng)
    left = gamma_map(maximize_as_choicefn(p), phi)
    right = maximize_as_choicefn(prel_preorder(p, lambda g: pullback(g, phi, name=""), acts_y))
    bad = first_disagreement(left, right, all_menus(acts_y, 4))
    return f"menu {menu_label(bad)}" if bad is not None else None


def _carriers(max_carrier: int):
    for n in range(1, max_carrier + 1):
        yield tuple(f"a{k}" for k in range(n))


def _injectivity_failure(max_carrier: int) -> str | None:
    for carrier in _carriers(max_carrier):
        menus = list(all_menus(carrier))
        seen: dict[tuple, object] = {}
        for p in enumerate_posets(carrier):
            sig = tuple(maximize(p, m) for m in menus)
            if sig in seen:
                return f"{seen[sig]!r} and {p!r}"
            seen[sig] = p
    return None


def _normalization_failure(max_carrier: int) -> str | None:
    for carrier in _carriers(max_carrier):
        for q in enumerate_preorders(carrier):
            normal = normalize_preorder(q)
            for m in all_menus(carrier):
                best = maximize(normal, m)
                if maximize(q, m) != best:
                    return f"{q!r} on {menu_label(m)}"
                for within in all_menus(sorted(m), min_size=0):
                    if maximal_subset_formula(normal, m, within) != (best <= within):
                        return f"subset formula for {normal!r} on {menu_label(m)} within {menu_label(within)}"
    return None


def check_maximization(seed: int, max_carrier: int = 4) -> list[CheckResult]:
    scope = f"carriers up to {max_carrier}"
    bad = _injectivity_failure(max_carrier)
    out = [CheckResult("maximization injective", bad is None, scope, bad or "")]
    out.append(_law("maximization natural", NATURALITY_INSTANCES, _naturality, seed))
    bad = _normalization_failure(max_carrier)
    out.append(CheckResult("normalization", bad is None, scope, bad or ""))
    return out


def _lift_law(rng: random.Random) -> str | None:
    x = _space(rng, "x", 1, 4)
    y = _space(rng, "y", len(x.points), 5)
    f = dict(zip(x.points, rng.sample(y.points, len(x.points))))
    c = random_choice_fn(x.points, rng)
    bad = first_disagreement(relabel(lift_along_injection(c, f), f), c, all_menus(x.points))
    return f"round trip on {menu_label(bad)}" if bad is not None else None


def _factor_law(rng: random.Random) -> str | None:
    x, y = _space(rng, "x", 1, 4), _space(rng, "y", 1, 3)
    phi = _random_map(rng, x, y)
    f = pullback(Act(y, tuple(rng.choice("abc") for _ in y.points)), phi)
    g = factor_through(f, phi, auto_witnesses(f, phi), "abc")
    return None if pullback(g, phi).table == f.table else "f != f′ ∘ φ"


def _colimit_law(rng: random.Random) -> str | None:
    sizes = sorted(rng.sample(range(1, 5), rng.randint(2, 3)))
    levels = [tuple(f"x{n}_{k}" for k in range(s)) for n, s in enumerate(sizes)]
    maps = [
        dict(zip(levels[n], rng.sample(levels[n + 1], len(levels[n]))))
        for n in range(len(levels) - 1)
    ]
    top = random_choice_fn(levels[-1], rng)
    family = [top]
    for n in range(len(levels) - 2, -1, -1):
        family.insert(0, relabel(family[0], maps[n]))
    try:
        colimit_choice(levels, maps, family)
    except CompatibilityError as e:
        return str(e)
    return None


def check_constructions(seed: int) -> list[CheckResult]:
    return [
        _law("lift round trip", CONSTRUCTION_INSTANCES, _lift_law, seed),
        _law("factor through", CONSTRUCTION_INSTANCES, _factor_law, seed),
        _law("colimit choice", COLIMIT_CHAINS, _colimit_law, seed),
    ]


def check_hierarchy(fixtures_dir: Path, bounds: SearchBounds, depth: int = 3) -> list[CheckResult]:
    out = []
    x = load_spec(fixtures_dir / "example.yaml")
    h = hierarchy_map(x, depth, bounds)
    res = coherence_check(h)
    out.append(CheckResult("coherence", res.ok, f"levels 1..{depth}", res.detail or (str(res.type) if not res.ok else "")))

    dup = load_spec(fixtures_dir / "example_duplicated.yaml")
    hd = hierarchy_map(dup, depth, bounds)
    split = [n for n in range(1, depth + 1) if not any({"t_Mm", "t_Mm2"} <= set(b) for b in hd.kernel(Player.J, n))]
    out.append(CheckResult("duplicate types share levels", not split, f"levels 1..{depth}", f"level {split[0]}" if split else ""))

    level = h.level(Player.J, 1)
    c = level.attitudes["t_Mm"]
    target = next((k for k in level.menus if len(k) > 1 and c.evaluate(k) != k), None)
    if target is None:
        out.append(CheckResult("coherence mutation", False, "no menu to mutate"))
    else:
        mutated = with_override(h, Player.J, 1, "t_Mm", target, target)
        caught = not coherence_check(mutated).ok
        out.append(CheckResult("coherence mutation", caught, "flipped one level-1 answer", "" if caught else menu_label(target)))
    return out


def _guarded(name: str, fn: Callable[[], CheckResult | list[CheckResult]]) -> list[CheckResult]:
    try:
        res = fn()
    except ChoiceStructError as e:
        return [CheckResult(name, False, type(e).__name__, str(e))]
    return res if isinstance(res, list) else [res]


def run_suite(fixtures_dir: Path, bounds: SearchBounds | None = None) -> list[CheckResult]:
    bounds = bounds or SearchBounds()
    fixtures_dir = Path(fixtures_dir)
    steps = [
        ("example tables", lambda: check_example_tables(fixtures_dir)),
        ("rationalizability", lambda: check_rationalization(fixtures_dir)),
        ("non-redundancy", lambda: check_nonredundancy(fixtures_dir, bounds)),
        ("functor laws", lambda: check_functor_laws(bounds.seed)),
        ("maximization", lambda: check_maximization(bounds.seed)),
        ("categorical constructions", lambda: check_constructions(bounds.seed)),
        ("hierarchy", lambda: check_hierarchy(fixtures_dir, bounds)),
    ]
    results = []
    for name, fn in steps:
        for res in _guarded(name, fn):
            log.info("%s: %s %s", res.name, "ok" if res.ok else "FAILED", res.detail)
            results.append(res)
    return results
