from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .act import OutcomeSet
from .choice import ChoiceEvent, ChoiceFn, RuleChoice, in_event, menu_label
from .criteria import CredalSet, UtilityView, criterion_choice, expected_utility, worst_case_regret, worst_case_utility
from .errors import WitnessError
from .game import GameSpec, Rationalization, action_acts, dominating_mixtures, fmt_rational, utility_view
from .hierarchy import BehavioralPartition, CoherenceResult, HierarchyImage, Verdict
from .space import point_label
from .structure import PLAYERS, ChoiceStructure, EmbeddingPair, example_reference_choice


def append_log(path: Path, record: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as f:
        f.write(json.dumps(record, default=str, ensure_ascii=False))
        f.write("\n")


def _score(c: ChoiceFn, f, menu: frozenset) -> Fraction | None:
    """The criterion value behind a criterion-backed choice, if there is one."""
    key = getattr(c, "key", None)
    if not isinstance(c, RuleChoice) or not isinstance(key, tuple) or len(key) != 3:
        return None
    name, belief, u = key
    if not isinstance(belief, CredalSet) or not isinstance(u, UtilityView):
        return None
    if name == "eu":
        return expected_utility(f, belief.extreme_points[0], belief.support, u)
    if name == "maxmin":
        return worst_case_utility(f, belief, u)
    if name == "regret":
        return worst_case_regret(f, menu, belief, u)
    return None


def _tie_note(c: ChoiceFn, menu: frozenset, answer: frozenset) -> str:
    if len(answer) < 2:
        return ""
    score = _score(c, next(iter(answer)), menu)
    if score is None:
        return f"{len(answer)}-way tie"
    return f"{len(answer)}-way tie at {fmt_rational(score)}"


def choice_table_records(x: ChoiceStructure, max_size: int | None = None) -> list[dict]:
    """One record per (player, type, basis menu with ≥ 2 acts)."""
    out = []
    for p in PLAYERS:
        ref = x.basis_acts(p)
        menus = sorted(
            (k for k in x.basis_menus(p, max_size) if len(k) > 1),
            key=lambda k: (-len(k), [ref.index(f) for f in sorted(k, key=ref.index)]),
        )
        for t in x.types(p).points:
            c = x.theta(p)[t]
            for k in menus:
                if not c.can_evaluate(k):
                    continue
                answer = c.evaluate(k)
                note = _tie_note(c, k, answer)
                reference = example_reference_choice(x, p, t, k)
                if reference is not None:
                    note = f"{note}; reference answer {{{','.join(reference)}}} differs under the closed interval"
                out.append({
                    "kind": "choice",
                    "player": p.value,
                    "type": point_label(t),
                    "menu": menu_label(k, ref),
                    "choice": menu_label(answer, ref),
                    "note": note,
                })
    return out


def _classes_label(classes: Iterable[Sequence]) -> str:
    return " | ".join("{" + ",".join(point_label(t) for t in block) + "}" for block in classes)


def hierarchy_records(h: HierarchyImage, coherence: CoherenceResult) -> list[dict]:
    out = []
    for n in range(1, h.depth + 1):
        for p in PLAYERS:
            level = h.level(p, n)
            out.append({
                "kind": "level",
                "player": p.value,
                "n": n,
                "base": len(level.base.points),
                "menus": len(level.menus),
                "classes": _classes_label(h.kernel(p, n)),
                "exhaustive_acts": level.complete,
            })
    rec = {"kind": "coherence", "ok": coherence.ok}
    if not coherence.ok:
        rec.update({
            "player": coherence.player.value if coherence.player else "",
            "n": coherence.n,
            "type": point_label(coherence.type) if coherence.type is not None else "",
            "menu": menu_label(coherence.menu) if coherence.menu else "",
            "expected": menu_label(coherence.expected) if coherence.expected is not None else "",
            "got": menu_label(coherence.got) if coherence.got is not None else "",
            "detail": coherence.detail,
        })
    out.append(rec)
    return out


def _verified(x: ChoiceStructure, sep) -> None:
    theta = x.theta(sep.player)
    event = ChoiceEvent(sep.menu, sep.choice)
    if not in_event(theta[sep.inside], event) or in_event(theta[sep.outside], event):
        raise WitnessError(f"separator for {sep.inside} and {sep.outside} does not re-verify")


def partition_records(x: ChoiceStructure, part: BehavioralPartition, verdict: Verdict) -> list[dict]:
    out = []
    for p in PLAYERS:
        out.append({"kind": "partition", "player": p.value, "blocks": _classes_label(part.blocks(p))})
    for sep in part.separators:
        _verified(x, sep)
        ref = x.basis_acts(sep.player)
        out.append({
            "kind": "separator",
            "player": sep.player.value,
            "round": sep.round,
            "menu": menu_label(sep.menu, ref),
            "within": menu_label(sep.choice, ref),
            "inside": point_label(sep.inside),
            "outside": point_label(sep.outside),
        })
    out.append({
        "kind": "verdict",
        "verdict": verdict.kind.value,
        "rounds": part.rounds,
        "witnesses": "; ".join(f"{p.value}: {point_label(s)}~{point_label(t)}" for p, s, t in verdict.witnesses),
        "detail": verdict.detail,
    })
    return out


def embedding_records(pairs: Sequence[EmbeddingPair]) -> list[dict]:
    return [
        {
            "kind": "embedding",
            "player": pair.player.value,
            "first": point_label(pair.first),
            "second": point_label(pair.second),
            "menu": menu_label(pair.menu) if pair.menu is not None else "",
            "separated": pair.separated,
        }
        for pair in pairs
    ]


def rationalization_records(g: GameSpec, r: Rationalization) -> list[dict]:
    """Round trace, witness beliefs (each re-verified) and the survivors line."""
    out = []
    survivors = [tuple(g.actions[0]), tuple(g.actions[1])]
    for rnd in r.rounds:
        for (p, a), belief in sorted(rnd.witnesses.items(), key=lambda kv: (kv[0][0], g.actions[kv[0][0]].index(kv[0][1]))):
            acts = action_acts(g, p, survivors[1 - p])
            target = acts[g.actions[p].index(a)]
            menu = frozenset(acts[g.actions[p].index(b)] for b in survivors[p])
            chosen = criterion_choice(g.criteria[p].criterion.value, belief, utility_view(g, p)).evaluate(menu)
            if target not in chosen:
                raise WitnessError(f"witness belief for {a} in round {rnd.number} does not re-verify")
            out.append({
                "kind": "witness",
                "round": rnd.number,
                "player": g.players[p],
                "action": a,
                "belief": belief.describe(),
            })
        out.append({
            "kind": "round",
            "round": rnd.number,
            "deleted": " | ".join(f"{g.players[p]}: {','.join(rnd.deleted[p]) or '-'}" for p in (0, 1)),
        })
        survivors = [tuple(a for a in survivors[p] if a not in rnd.deleted[p]) for p in (0, 1)]
    out.append({"kind": "survivors", "survivors": r.survivors_line()})
    return out


def dominance_records(g: GameSpec, player: int) -> list[dict]:
    out = []
    actions = g.actions[player]
    for target in actions:
        others = [a for a in actions if a != target]
        for a, b in combinations(others, 2):
            interval = dominating_mixtures(g, player, target, a, b)
            if interval is None:
                continue
            out.append({
                "kind": "dominance",
                "player": g.players[player],
                "target": target,
                "mixture": f"p*{a} + (1-p)*{b}",
                "weights": str(interval),
            })
    return out


def outcome_records(z: OutcomeSet) -> list[dict]:
    return [
        {"kind": "outcome", "id": point_label(o), "utility": "(" + ",".join(fmt_rational(u) for u in z.utilities[k]) + ")"}
        for k, o in enumerate(z.outcomes)
    ] if z.utilities else []


def _cell(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    return "" if v is None else str(v)


def render_table(records: Sequence[dict]) -> str:
    """Consecutive records of one kind form one aligned block."""
    lines: list[str] = []
    k = 0
    while k < len(records):
        keys = list(records[k])
        group = [records[k]]
        k += 1
        while k < len(records) and list(records[k]) == keys:
            group.append(records[k])
            k += 1
        cols = [c for c in keys if c != "kind"]
        rows = [[_cell(r.get(c)) for c in cols] for r in group]
        widths = [max(len(c), *(len(row[n]) for row in rows)) for n, c in enumerate(cols)]
        if lines:
            lines.append("")
        lines.append(f"[{group[0]['kind']}]")
        lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
        for row in rows:
            lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def render_machine(records: Sequence[dict]) -> str:
    return "\n".join(json.dumps(r, default=str, ensure_ascii=False) for r in records)


def render(records: Sequence[dict], fmt: str) -> str:
    return render_machine(records) if fmt == "machine" else render_table(records)
