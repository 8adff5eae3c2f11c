from __future__ import annotations

from pathlib import Path

import pytest

from choicestruct.config import SearchBounds
from choicestruct.specfile import load_spec

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def example(fixtures_dir):
    return load_spec(fixtures_dir / "example.yaml")


@pytest.fixture(scope="session")
def duplicated(fixtures_dir):
    return load_spec(fixtures_dir / "example_duplicated.yaml")


@pytest.fixture(scope="session")
def preference(fixtures_dir):
    return load_spec(fixtures_dir / "preference.yaml")


@pytest.fixture(scope="session")
def type_beliefs(fixtures_dir):
    return load_spec(fixtures_dir / "type_beliefs.yaml")


@pytest.fixture(scope="session")
def games(fixtures_dir) -> dict:
    return {c: load_spec(fixtures_dir / f"game_{c}.yaml") for c in ("eu", "maxmin", "regret")}


@pytest.fixture
def bounds() -> SearchBounds:
    return SearchBounds(act_cap=4096, menu_cap=3, samples=32, universe_cap=20000, seed=0)


@pytest.fixture
def acts_i(example) -> dict:
    from choicestruct.structure import Player

    return {f.name: f for f in example.basis_acts(Player.I)}


@pytest.fixture
def acts_j(example) -> dict:
    from choicestruct.structure import Player

    return {f.name: f for f in example.basis_acts(Player.J)}
