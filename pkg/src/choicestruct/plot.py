"""Belief figures: expected utility and negative menu regret against P(second opponent action).

Saves as PNG. No display required (matplotlib 'Agg' backend)."""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .criteria import expected_utility, regret_profile
from .errors import SpaceError
from .game import GameSpec, action_acts, fmt_rational, utility_view

_ENDPOINTS = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))


def belief_lines(g: GameSpec, player: int, menu: Sequence | None = None) -> dict:
    """Per action: ((EU at p=0, EU at p=1), (−regret at p=0, −regret at p=1)).

    Both quantities are linear in p, so the endpoints fix each line."""
    opp = g.actions[1 - player]
    if len(opp) != 2:
        raise SpaceError(f"belief figures need an opponent with 2 actions, got {len(opp)}")
    names = tuple(menu) if menu else g.actions[player]
    unknown = [a for a in names if a not in g.actions[player]]
    if unknown:
        raise SpaceError(f"unknown actions {unknown}")
    acts = {a: f for a, f in zip(g.actions[player], action_acts(g, player))}
    chosen = [acts[a] for a in names]
    u = utility_view(g, player)
    out = {}
    for a, f in zip(names, chosen):
        eu = tuple(expected_utility(f, v, opp, u) for v in _ENDPOINTS)
        profile = regret_profile(f, chosen, opp, u)
        neg = tuple(-sum(p * r for p, r in zip(v, profile)) for v in _ENDPOINTS)
        out[a] = (eu, neg)
    return out


def render_belief_figure(
    g: GameSpec,
    player: int,
    out_path: Path,
    menu: Sequence | None = None,
    interval: tuple | None = None,
) -> Path:
    lines = belief_lines(g, player, menu)
    opp = g.actions[1 - player]
    fig, (ax_eu, ax_rg) = plt.subplots(1, 2, figsize=(11, 4.5), dpi=150)
    xs = [0.0, 1.0]
    for a, (eu, neg) in lines.items():
        ax_eu.plot(xs, [float(v) for v in eu], marker="o", label=a)
        ax_rg.plot(xs, [float(v) for v in neg], marker="o", label=a)
    for ax, title in ((ax_eu, "expected utility"), (ax_rg, "negative expected regret")):
        if interval is not None:
            lo, hi = (Fraction(v) for v in interval)
            ax.axvspan(float(lo), float(hi), color="#808080", alpha=0.15,
                       label=f"[{fmt_rational(lo)}, {fmt_rational(hi)}]")
        ax.set_xlim(0, 1)
        ax.set_xlabel(f"P({opp[1]})")
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best", fontsize=8, framealpha=0.9)
    fig.suptitle(f"player {g.players[player]}, menu {{{','.join(lines)}}}")
    fig.tight_layout()
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return out_path
