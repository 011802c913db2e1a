"""Shared error types.

Input-style failures (bad CSV, bad schema) collect every violation before
raising, so one run reports all defects instead of the first one hit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

# Stable violation codes, referenced by tests and error messages.
DUPLICATE_ATTRIBUTE = "DuplicateAttribute"
GROUP_SA_FORBIDDEN = "GroupSAForbidden"
EMPTY_SCHEMA = "EmptySchema"
MALFORMED_ATTRIBUTE = "MalformedAttribute"
MISSING_COLUMN = "MissingColumn"
DUPLICATE_ID = "DuplicateId"
MALFORMED_ROW = "MalformedRow"
MALFORMED_DATE = "MalformedDate"
INVERTED_INTERVAL = "InvertedInterval"
DUPLICATE_EDGE = "DuplicateEdge"
UNKNOWN_INDIVIDUAL = "UnknownIndividual"
UNKNOWN_GROUP = "UnknownGroup"


class SegcubeError(Exception):
    """Base class for every error raised by this package."""


@dataclass(frozen=True)
class Violation:
    """One input defect: a stable code, a message, and an optional 1-based line."""

    code: str
    message: str
    line: int | None = None

    def __str__(self) -> str:
        where = f" (line {self.line})" if self.line is not None else ""
        return f"{self.code}: {self.message}{where}"


class InputError(SegcubeError):
    """Raised once an input pass finishes; carries every violation found."""

    def __init__(self, violations: Iterable[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))

    @property
    def codes(self) -> list[str]:
        return [v.code for v in self.violations]


class UndefinedCellError(SegcubeError):
    """Index not computable: minority empty or spanning the whole population."""


class InvalidShapeError(SegcubeError):
    """Atkinson shape parameter outside the open interval (0, 1)."""


class UnassignedGroupError(SegcubeError):
    """An active membership edge references a group with no unit assignment."""


class UnknownAttributeError(SegcubeError):
    """A query coordinate names an attribute absent from the schema."""


class UnknownValueError(SegcubeError):
    """A query coordinate names a value never observed for that attribute."""


class ConfigError(SegcubeError):
    """Inconsistent or incomplete pipeline configuration."""
