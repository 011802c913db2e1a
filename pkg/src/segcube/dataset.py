"""Parsers for the four inputs: individuals, groups, membership, snapshot dates.

All parsers collect every violation (with 1-based line numbers) before
failing, and all of them preserve input row order so that a parse /
re-serialize / re-parse round trip is exact. Downstream stages sort
canonically, so input order never changes any cube value.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, replace
from typing import Any, Iterable

from . import errors as err
from ._csvio import join_multi, read_rows, split_multi, write_rows
from .errors import InputError, Violation
from .schema import (
    MULTI,
    OWNER_GROUP,
    OWNER_INDIVIDUAL,
    AttributeSchema,
    Group,
    Individual,
    MembershipEdge,
    SnapshotDate,
)

_NEG_INF = dt.date.min
_POS_INF = dt.date.max


@dataclass(frozen=True)
class Dataset:
    """The four parsed inputs plus the schema they conform to."""

    schema: AttributeSchema
    individuals: tuple[Individual, ...]
    groups: tuple[Group, ...]
    membership: tuple[MembershipEdge, ...]
    snapshots: tuple[SnapshotDate, ...] = ()

    def individual_ids(self) -> set[str]:
        return {i.id for i in self.individuals}

    def group_ids(self) -> set[str]:
        return {g.id for g in self.groups}


def _check_header(header: list[str], expected_attrs: list[str], line: int) -> list[Violation]:
    """Header must be `id` plus exactly the declared attributes (any order)."""
    violations = []
    if not header or header[0] != "id":
        violations.append(Violation(err.MISSING_COLUMN, "first column must be 'id'", line))
        return violations
    got = header[1:]
    if len(set(got)) != len(got):
        violations.append(Violation(err.MISSING_COLUMN, "duplicate column in header", line))
    for name in expected_attrs:
        if name not in got:
            violations.append(Violation(err.MISSING_COLUMN, f"declared attribute {name!r} missing", line))
    for name in got:
        if name not in expected_attrs:
            violations.append(Violation(err.MISSING_COLUMN, f"undeclared column {name!r}", line))
    return violations


def _parse_entities(source: Any, schema: AttributeSchema, owner: str):
    decls = {a.name: a for a in schema.owned_by(owner)}
    violations: list[Violation] = []
    entities = []
    rows = read_rows(source)
    try:
        line, header = next(rows)
    except StopIteration:
        raise InputError([Violation(err.MISSING_COLUMN, "empty file, header expected", 1)])
    violations += _check_header(header, list(decls), line)
    if violations:
        raise InputError(violations)
    seen_ids: set[str] = set()
    for line, row in rows:
        if len(row) != len(header):
            violations.append(
                Violation(err.MALFORMED_ROW, f"expected {len(header)} cells, got {len(row)}", line)
            )
            continue
        ident = row[0]
        if not ident:
            violations.append(Violation(err.MALFORMED_ROW, "empty id", line))
            continue
        if ident in seen_ids:
            violations.append(Violation(err.DUPLICATE_ID, f"id {ident!r} repeated", line))
            continue
        seen_ids.add(ident)
        values: dict[str, frozenset[str]] = {}
        bad = False
        for name, cell in zip(header[1:], row[1:]):
            decl = decls[name]
            parts = split_multi(cell)
            if decl.multiplicity != MULTI and len(parts) > 1:
                violations.append(
                    Violation(err.MALFORMED_ROW, f"multiple values for single-valued {name!r}", line)
                )
                bad = True
                break
            if parts:
                values[name] = frozenset(parts)
        if not bad:
            entities.append((ident, values))
    if violations:
        raise InputError(violations)
    return entities


def parse_individuals(source: Any, schema: AttributeSchema) -> list[Individual]:
    """Parse the individuals CSV: header ``id`` plus declared individual attributes."""
    return [Individual(i, v) for i, v in _parse_entities(source, schema, OWNER_INDIVIDUAL)]


def parse_groups(source: Any, schema: AttributeSchema) -> list[Group]:
    """Parse the groups CSV: header ``id`` plus declared group attributes (CA only)."""
    return [Group(i, v) for i, v in _parse_entities(source, schema, OWNER_GROUP)]


MEMBERSHIP_HEADER = ["individualID", "groupID"]
MEMBERSHIP_HEADER_DATED = ["individualID", "groupID", "start", "end"]


def parse_membership(source: Any) -> list[MembershipEdge]:
    """Parse the membership CSV; empty date cells are open bounds.

    Duplicate (individual, group) pairs whose validity intervals overlap are
    ambiguous in the source data and rejected rather than merged.
    """
    violations: list[Violation] = []
    edges: list[MembershipEdge] = []
    intervals: dict[tuple[str, str], list[tuple[dt.date, dt.date]]] = {}
    rows = read_rows(source)
    try:
        line, header = next(rows)
    except StopIteration:
        raise InputError([Violation(err.MISSING_COLUMN, "empty file, header expected", 1)])
    if header not in (MEMBERSHIP_HEADER, MEMBERSHIP_HEADER_DATED):
        raise InputError(
            [
                Violation(
                    err.MISSING_COLUMN,
                    "header must be individualID,groupID[,start,end]",
                    line,
                )
            ]
        )
    dated = len(header) == 4
    for line, row in rows:
        if len(row) != len(header) or not row[0] or not row[1]:
            violations.append(Violation(err.MALFORMED_ROW, "bad membership row", line))
            continue
        start = end = None
        if dated:
            try:
                start = dt.date.fromisoformat(row[2]) if row[2] else None
                end = dt.date.fromisoformat(row[3]) if row[3] else None
            except ValueError:
                violations.append(Violation(err.MALFORMED_DATE, f"bad ISO date in {row[2:4]!r}", line))
                continue
            if start is not None and end is not None and start > end:
                violations.append(
                    Violation(err.INVERTED_INTERVAL, f"start {start} after end {end}", line)
                )
                continue
        key = (row[0], row[1])
        lo, hi = start or _NEG_INF, end or _POS_INF
        if any(lo <= h and l <= hi for l, h in intervals.get(key, ())):
            violations.append(
                Violation(err.DUPLICATE_EDGE, f"overlapping duplicate of {key}", line)
            )
            continue
        intervals.setdefault(key, []).append((lo, hi))
        edges.append(MembershipEdge(row[0], row[1], start, end))
    if violations:
        raise InputError(violations)
    return edges


def link_check(dataset: Dataset) -> Dataset:
    """Enforce referential integrity; reports every dangling id at once."""
    violations: list[Violation] = []
    individuals = dataset.individual_ids()
    groups = dataset.group_ids()
    for ident in sorted({e.individual_id for e in dataset.membership} - individuals):
        violations.append(Violation(err.UNKNOWN_INDIVIDUAL, f"membership references unknown individual {ident!r}"))
    for ident in sorted({e.group_id for e in dataset.membership} - groups):
        violations.append(Violation(err.UNKNOWN_GROUP, f"membership references unknown group {ident!r}"))
    if violations:
        raise InputError(violations)
    return dataset


def load_dataset(
    schema: AttributeSchema,
    individuals: Any,
    groups: Any,
    membership: Any,
    snapshots: Iterable[SnapshotDate] = (),
) -> Dataset:
    """Parse all inputs and run the referential integrity barrier."""
    ds = Dataset(
        schema=schema,
        individuals=tuple(parse_individuals(individuals, schema)),
        groups=tuple(parse_groups(groups, schema)),
        membership=tuple(parse_membership(membership)),
        snapshots=tuple(snapshots),
    )
    return link_check(ds)


def _entity_rows(entities, attrs):
    yield ["id"] + [a.name for a in attrs]
    for e in entities:
        yield [e.id] + [join_multi(e.values.get(a.name, ())) for a in attrs]


def write_individuals(individuals: Iterable[Individual], schema: AttributeSchema, dest: Any) -> None:
    write_rows(dest, _entity_rows(individuals, schema.owned_by(OWNER_INDIVIDUAL)))


def write_groups(groups: Iterable[Group], schema: AttributeSchema, dest: Any) -> None:
    write_rows(dest, _entity_rows(groups, schema.owned_by(OWNER_GROUP)))


def write_membership(edges: Iterable[MembershipEdge], dest: Any) -> None:
    edges = list(edges)
    dated = any(e.has_validity for e in edges)
    rows: list[list[str]] = [MEMBERSHIP_HEADER_DATED if dated else list(MEMBERSHIP_HEADER)]
    for e in edges:
        row = [e.individual_id, e.group_id]
        if dated:
            row += [e.start.isoformat() if e.start else "", e.end.isoformat() if e.end else ""]
        rows.append(row)
    write_rows(dest, rows)
