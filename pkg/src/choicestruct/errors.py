from __future__ import annotations

from typing import Any


class ChoiceStructError(Exception):
    """Base class for every error raised by the library."""


class SpaceError(ChoiceStructError):
    pass


class MeasurabilityError(ChoiceStructError):
    pass


class CapExceededError(ChoiceStructError):
    def __init__(self, what: str, requested: int, cap: int):
        super().__init__(f"{what}: {requested} exceeds cap {cap}")
        self.what = what
        self.requested = requested
        self.cap = cap


class ContractionError(ChoiceStructError):
    def __init__(self, menu: Any, answer: Any, message: str | None = None):
        super().__init__(message or f"choice {answer!r} is not a subset of menu {menu!r}")
        self.menu = menu
        self.answer = answer


class MenuOutsideUniverseError(ChoiceStructError):
    pass


class WitnessError(ChoiceStructError):
    pass


class CompatibilityError(ChoiceStructError):
    pass


class NotInjectiveError(ChoiceStructError):
    pass


class RelationError(ChoiceStructError):
    pass


class NormalizationRequired(RelationError):
    """prel_map produced a preorder that is not anti-symmetric.

    The preorder is attached so callers can pass it to normalize_preorder."""

    def __init__(self, preorder: Any):
        super().__init__("transported relation is not anti-symmetric; normalize it first")
        self.preorder = preorder


class BeliefError(ChoiceStructError):
    pass


class ConfigError(ChoiceStructError):
    pass


class SpecError(ChoiceStructError):
    def __init__(self, message: str, *, field: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field {field}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.field = field
        self.line = line
