"""Run defaults. Loaded once from configs/defaults.yaml; module constants fill gaps."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import yaml

from .errors import ConfigError

_CFG_PATH = Path(__file__).resolve().parents[2] / "configs" / "defaults.yaml"

ACT_CAP = 4096
MENU_CAP = 4
SAMPLES = 64
UNIVERSE_CAP = 20000
SEED = 0
LEVELS = 2
GRID = 8

_FAMILY_KINDS = {
    "eu": ("grid_points",),
    "maxmin": ("grid_points", "full_simplex"),
    "regret": ("grid_points", "full_simplex", "grid_intervals"),
}


@lru_cache(maxsize=1)
def load_defaults() -> dict:
    if not _CFG_PATH.exists():
        return {}
    with _CFG_PATH.open("r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


@dataclass(frozen=True)
class SearchBounds:
    act_cap: int = ACT_CAP
    menu_cap: int = MENU_CAP
    samples: int = SAMPLES
    universe_cap: int = UNIVERSE_CAP
    seed: int = SEED

    def __post_init__(self):
        for name in ("act_cap", "menu_cap", "samples", "universe_cap"):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")

    @classmethod
    def from_defaults(cls, **overrides) -> SearchBounds:
        cfg = dict(load_defaults().get("bounds") or {})
        cfg.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**{k: cfg[k] for k in cls.__dataclass_fields__ if k in cfg})


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: Path | None = None
    levels: int = LEVELS
    act_cap: int = ACT_CAP
    menu_cap: int = MENU_CAP
    samples: int = SAMPLES
    universe_cap: int = UNIVERSE_CAP
    grid: int = GRID
    seed: int = SEED
    fmt: str = "table"
    log_path: Path | None = None
    verbose: bool = False

    def __post_init__(self):
        if self.levels < 1:
            raise ConfigError(f"levels must be at least 1, got {self.levels}")
        if self.grid < 1:
            raise ConfigError(f"grid must be at least 1, got {self.grid}")
        if self.fmt not in ("table", "machine"):
            raise ConfigError(f"unknown output format {self.fmt!r}")
        self.bounds()

    def bounds(self) -> SearchBounds:
        return SearchBounds(self.act_cap, self.menu_cap, self.samples, self.universe_cap, self.seed)

    @classmethod
    def from_defaults(cls, command: str, **overrides) -> RunConfig:
        cfg = load_defaults()
        base = dict(cfg.get("bounds") or {})
        for key in ("levels", "grid"):
            if key in cfg:
                base[key] = cfg[key]
        if "format" in cfg:
            base["fmt"] = cfg["format"]
        base.update({k: v for k, v in overrides.items() if v is not None})
        known = {k: v for k, v in base.items() if k in cls.__dataclass_fields__}
        return cls(command=command, **known)


def default_families(criterion: str, grid: int | None = None) -> tuple:
    from .game import BeliefFamily, FamilyKind

    n = grid if grid is not None else load_defaults().get("grid", GRID)
    key = criterion.lower()
    entries = (load_defaults().get("families") or {}).get(key)
    if entries is None:
        if key not in _FAMILY_KINDS:
            raise ConfigError(f"unknown criterion {criterion!r}")
        entries = [{"kind": k} for k in _FAMILY_KINDS[key]]
    out = []
    for entry in entries:
        try:
            kind = FamilyKind(entry["kind"])
        except (KeyError, ValueError):
            raise ConfigError(f"bad belief family entry for {criterion}: {entry!r}") from None
        out.append(BeliefFamily(kind, int(entry.get("n", n)), int(entry.get("max_vertices", 3))))
    return tuple(out)
