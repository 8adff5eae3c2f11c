from __future__ import annotations

import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable

import click

from . import __version__
from .config import RunConfig, default_families
from .errors import ChoiceStructError, WitnessError
from .game import Criterion, CriterionSpec, GameSpec, example_game, rationalize
from .hierarchy import coherence_check, hierarchy_map, non_redundancy_verdict, refine_partition
from .plot import render_belief_figure
from .qa import run_suite
from .report import (
    append_log,
    choice_table_records,
    dominance_records,
    embedding_records,
    hierarchy_records,
    outcome_records,
    partition_records,
    rationalization_records,
    render,
)
from .specfile import load_spec
from .structure import ChoiceStructure, PreferenceStructure, embed_preference_structure, embedding_report, example_structure

log = logging.getLogger("choicestruct")

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


class InputError(click.ClickException):
    exit_code = 2


class VerificationFailed(click.ClickException):
    exit_code = 1


def run_options(f: Callable) -> Callable:
    options = [
        click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path)),
        click.option("--levels", type=int),
        click.option("--act-cap", type=int),
        click.option("--menu-cap", type=int),
        click.option("--samples", type=int),
        click.option("--universe-cap", type=int),
        click.option("--grid", type=int),
        click.option("--seed", type=int),
        click.option("--format", "fmt", type=click.Choice(["table", "machine"])),
        click.option("--log", "log_path", type=click.Path(dir_okay=False, path_type=Path)),
        click.option("--verbose", is_flag=True),
    ]
    for opt in reversed(options):
        f = opt(f)
    return f


def _config(command: str, opts: dict) -> RunConfig:
    try:
        cfg = RunConfig.from_defaults(command, **opts)
    except ChoiceStructError as e:
        raise InputError(str(e)) from None
    logging.basicConfig(
        level=logging.INFO if cfg.verbose else logging.WARNING,
        format="%(asctime)s [%(levelname)s] %(message)s",
        stream=sys.stderr,
        force=True,
    )
    return cfg


def _emit(cfg: RunConfig, records: list[dict], failure: str | None = None) -> None:
    click.echo(render(records, cfg.fmt))
    if cfg.log_path is not None:
        append_log(cfg.log_path, {
            "kind": cfg.command,
            "input": str(cfg.input_path) if cfg.input_path else "",
            "seed": cfg.seed,
            "records": len(records),
            "ok": failure is None,
            "failure": failure or "",
        })
    if failure:
        raise VerificationFailed(failure)


def _guard(cfg: RunConfig, work: Callable[[], tuple[list[dict], str | None]]) -> None:
    try:
        records, failure = work()
    except WitnessError as e:
        raise VerificationFailed(str(e)) from None
    except ChoiceStructError as e:
        raise InputError(str(e)) from None
    _emit(cfg, records, failure)


def _structure(cfg: RunConfig) -> ChoiceStructure:
    if cfg.input_path is None:
        return example_structure()
    x = load_spec(cfg.input_path)
    if isinstance(x, PreferenceStructure):
        log.info("embedding preference structure %s by maximization", x.name or cfg.input_path)
        return embed_preference_structure(x)
    if not isinstance(x, ChoiceStructure):
        raise InputError(f"{cfg.input_path} is not a structure file")
    return x


def _game(cfg: RunConfig, criterion: str | None = None) -> GameSpec:
    if cfg.input_path is None:
        return example_game(criterion or "regret", cfg.grid)
    g = load_spec(cfg.input_path, cfg.grid)
    if not isinstance(g, GameSpec):
        raise InputError(f"{cfg.input_path} is not a game file")
    if criterion is not None:
        spec = CriterionSpec(Criterion(criterion), default_families(criterion, cfg.grid))
        g = g.with_criteria((spec, spec))
    return g


def _player_index(g: GameSpec, player: str | None) -> int:
    if player is None:
        return 0
    if player not in g.players:
        raise InputError(f"unknown player {player!r}; expected one of {list(g.players)}")
    return g.players.index(player)


def _interval(text: str | None) -> tuple | None:
    if text is None:
        return None
    try:
        lo, hi = (Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"interval {text!r} must look like 1/4,1") from None
    if not 0 <= lo <= hi <= 1:
        raise InputError(f"interval {text!r} is not within [0, 1]")
    return lo, hi


@click.group()
@click.version_option(__version__)
def main():
    """Choice structures over Savage acts: hierarchies, non-redundancy and rationalizability."""


@main.command("choice-eval")
@run_options
def choice_eval(**opts):
    """Print each type's choices over the act basis."""
    cfg = _config("choice-eval", opts)

    def work():
        x = _structure(cfg)
        return outcome_records(x.outcomes) + choice_table_records(x, cfg.menu_cap), None

    _guard(cfg, work)


@main.command()
@run_options
def hierarchy(**opts):
    """Hierarchy levels up to --levels and the coherence verdict."""
    cfg = _config("hierarchy", opts)

    def work():
        h = hierarchy_map(_structure(cfg), cfg.levels, cfg.bounds())
        res = coherence_check(h)
        failure = None if res.ok else f"coherence fails for {res.type} at level {res.n}"
        return hierarchy_records(h, res), failure

    _guard(cfg, work)


@main.command()
@run_options
def nonred(**opts):
    """Behavioral partition, separating menus and the non-redundancy verdict."""
    cfg = _config("nonred", opts)

    def work():
        x = _structure(cfg)
        part = refine_partition(x, cfg.bounds())
        return partition_records(x, part, non_redundancy_verdict(part)), None

    _guard(cfg, work)


@main.command()
@run_options
def embed(**opts):
    """Embed a preference structure and report separation of its types."""
    cfg = _config("embed", opts)

    def work():
        if cfg.input_path is None:
            raise InputError("embed needs --input with a preference structure")
        x = load_spec(cfg.input_path)
        if not isinstance(x, PreferenceStructure):
            raise InputError(f"{cfg.input_path} is not a preference structure")
        pairs = embedding_report(x, cfg.bounds())
        lost = [p for p in pairs if p.menu is None]
        failure = f"types {lost[0].first} and {lost[0].second} embed to the same choice function" if lost else None
        return embedding_records(pairs), failure

    _guard(cfg, work)


@main.command(name="rationalize")
@run_options
@click.option("--criterion", type=click.Choice([c.value for c in Criterion]), help="Override both players' criterion.")
def rationalize_cmd(criterion: str | None, **opts):
    """Iterated elimination of actions no belief in the family justifies."""
    cfg = _config("rationalize", opts)

    def work():
        g = _game(cfg, criterion)
        return rationalization_records(g, rationalize(g)), None

    _guard(cfg, work)


@main.command()
@run_options
@click.option("--player", help="Player name; defaults to the row player.")
def dominance(player: str | None, **opts):
    """Mixtures of two actions that strictly dominate a third."""
    cfg = _config("dominance", opts)

    def work():
        g = _game(cfg)
        return dominance_records(g, _player_index(g, player)), None

    _guard(cfg, work)


@main.command()
@run_options
@click.option("--player", help="Player name; defaults to the row player.")
@click.option("--menu", help="Comma-separated own actions; defaults to all.")
@click.option("--interval", help="Shaded belief interval for the second opponent action, e.g. 1/4,1.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path), required=True)
def plot(player: str | None, menu: str | None, interval: str | None, out_path: Path, **opts):
    """Expected utility and negative regret against the opponent belief."""
    cfg = _config("plot", opts)

    def work():
        g = _game(cfg)
        actions = [a.strip() for a in menu.split(",")] if menu else None
        path = render_belief_figure(g, _player_index(g, player), out_path, actions, _interval(interval))
        return [{"kind": "figure", "path": str(path)}], None

    _guard(cfg, work)


@main.command()
@run_options
@click.option("--fixtures", "fixtures_dir", type=click.Path(exists=True, file_okay=False, path_type=Path), default=FIXTURES)
def verify(fixtures_dir: Path, **opts):
    """Run the acceptance suite on the shipped fixtures."""
    cfg = _config("verify", opts)

    def work():
        results = run_suite(fixtures_dir, cfg.bounds())
        records = [
            {"kind": "check", "name": r.name, "ok": r.ok, "detail": r.detail, "counterexample": r.counterexample}
            for r in results
        ]
        failed = [r for r in results if not r.ok]
        failure = f"{failed[0].name}: {failed[0].counterexample or failed[0].detail}" if failed else None
        return records, failure

    _guard(cfg, work)


if __name__ == "__main__":
    main()
