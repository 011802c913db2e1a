"""Attribute schema, entities, and membership edges shared by every stage.

Attributes are declared either as segregation attributes (SA), which define
minority subgroups, or context attributes (CA), which define where
segregation may show up. Groups never carry SA attributes. All values are
categorical strings; numeric data (age, income) must be pre-discretized
into bands before ingestion.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Any, Mapping

from . import errors as err
from ._csvio import read_rows
from .errors import InputError, Violation

SA = "SA"
CA = "CA"
OWNER_INDIVIDUAL = "individual"
OWNER_GROUP = "group"
SINGLE = "single"
MULTI = "multi"

SnapshotDate = dt.date


@dataclass(frozen=True)
class AttributeDecl:
    name: str
    kind: str  # SA | CA
    owner: str  # individual | group
    multiplicity: str  # single | multi


@dataclass(frozen=True)
class AttributeSchema:
    """Ordered attribute declarations; order fixes column and coordinate order."""

    attributes: tuple[AttributeDecl, ...]

    def names(self) -> list[str]:
        return [a.name for a in self.attributes]

    def get(self, name: str) -> AttributeDecl | None:
        for a in self.attributes:
            if a.name == name:
                return a
        return None

    def owned_by(self, owner: str) -> list[AttributeDecl]:
        return [a for a in self.attributes if a.owner == owner]

    def of_kind(self, kind: str) -> list[AttributeDecl]:
        return [a for a in self.attributes if a.kind == kind]

    def sa_names(self) -> list[str]:
        return [a.name for a in self.attributes if a.kind == SA]

    def ca_names(self) -> list[str]:
        return [a.name for a in self.attributes if a.kind == CA]


@dataclass(frozen=True)
class Individual:
    """An individual with its attribute values (each a set of strings)."""

    id: str
    values: Mapping[str, frozenset[str]] = field(default_factory=dict)


@dataclass(frozen=True)
class Group:
    """A group with its context attribute values (groups carry CA only)."""

    id: str
    values: Mapping[str, frozenset[str]] = field(default_factory=dict)


@dataclass(frozen=True)
class MembershipEdge:
    """One (individual, group) affiliation, optionally bounded in time.

    An absent bound is open: the edge is active on every date on that side.
    An edge with neither bound is always active.
    """

    individual_id: str
    group_id: str
    start: dt.date | None = None
    end: dt.date | None = None

    @property
    def has_validity(self) -> bool:
        return self.start is not None or self.end is not None


def validate_schema(schema: AttributeSchema) -> AttributeSchema:
    """Check every schema invariant, collecting all violations before raising.

    Idempotent: a schema that passes once passes again unchanged.
    """
    violations: list[Violation] = []
    seen: set[str] = set()
    for decl in schema.attributes:
        if not decl.name or "," in decl.name:
            violations.append(
                Violation(err.MALFORMED_ATTRIBUTE, f"bad attribute name {decl.name!r}")
            )
        if decl.name in seen:
            violations.append(
                Violation(err.DUPLICATE_ATTRIBUTE, f"attribute {decl.name!r} declared twice")
            )
        seen.add(decl.name)
        if decl.kind not in (SA, CA):
            violations.append(
                Violation(err.MALFORMED_ATTRIBUTE, f"{decl.name}: kind must be SA or CA")
            )
        if decl.owner not in (OWNER_INDIVIDUAL, OWNER_GROUP):
            violations.append(
                Violation(err.MALFORMED_ATTRIBUTE, f"{decl.name}: owner must be individual or group")
            )
        if decl.multiplicity not in (SINGLE, MULTI):
            violations.append(
                Violation(err.MALFORMED_ATTRIBUTE, f"{decl.name}: multiplicity must be single or multi")
            )
        if decl.owner == OWNER_GROUP and decl.kind == SA:
            violations.append(
                Violation(err.GROUP_SA_FORBIDDEN, f"group attribute {decl.name!r} cannot be SA")
            )
    if not schema.attributes:
        violations.append(Violation(err.EMPTY_SCHEMA, "schema declares no attributes"))
    else:
        if not any(a.kind == SA for a in schema.attributes):
            violations.append(Violation(err.EMPTY_SCHEMA, "schema declares no SA attribute"))
        if not any(a.kind == CA for a in schema.attributes):
            violations.append(Violation(err.EMPTY_SCHEMA, "schema declares no CA attribute"))
    if violations:
        raise InputError(violations)
    return schema


def edge_active_at(edge: MembershipEdge, date: SnapshotDate) -> bool:
    """True iff the edge's validity interval contains *date* (open bounds pass)."""
    if edge.start is not None and date < edge.start:
        return False
    if edge.end is not None and date > edge.end:
        return False
    return True


SCHEMA_HEADER = ["name", "kind", "owner", "multiplicity"]


def load_schema(source: Any) -> AttributeSchema:
    """Parse a schema CSV (``name,kind,owner,multiplicity``) and validate it."""
    violations: list[Violation] = []
    decls: list[AttributeDecl] = []
    rows = read_rows(source)
    try:
        line, header = next(rows)
    except StopIteration:
        raise InputError([Violation(err.EMPTY_SCHEMA, "schema file is empty", 1)])
    if header != SCHEMA_HEADER:
        raise InputError(
            [Violation(err.MISSING_COLUMN, f"schema header must be {','.join(SCHEMA_HEADER)}", line)]
        )
    for line, row in rows:
        if len(row) != 4:
            violations.append(Violation(err.MALFORMED_ROW, f"expected 4 cells, got {len(row)}", line))
            continue
        decls.append(AttributeDecl(*row))
    if violations:
        raise InputError(violations)
    return validate_schema(AttributeSchema(tuple(decls)))


def write_schema(schema: AttributeSchema, dest: Any) -> None:
    from ._csvio import write_rows

    rows = [SCHEMA_HEADER]
    rows += [[a.name, a.kind, a.owner, a.multiplicity] for a in schema.attributes]
    write_rows(dest, rows)


def parse_date(text: str, line: int | None = None) -> dt.date:
    """Parse an ISO calendar date, reporting the offending line on failure."""
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise InputError([Violation(err.MALFORMED_DATE, f"bad ISO date {text!r}", line)])
