"""Joins individual features with group/unit features into the unit table.

One row per distinct (individual, unit) pair induced by the membership
active at the snapshot date: an individual sitting in k groups spread over
u units yields exactly u rows. Row CA values are the union of the
individual's own CA values and those of its groups inside that unit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Mapping

from . import errors as err
from ._csvio import join_multi, read_rows, split_multi, write_rows
from .clustering import UnitAssignment
from .dataset import Dataset
from .errors import InputError, UnassignedGroupError, Violation
from .schema import (
    CA,
    MULTI,
    OWNER_GROUP,
    OWNER_INDIVIDUAL,
    SA,
    AttributeSchema,
    SnapshotDate,
    edge_active_at,
)

UNIT_COLUMN = "unitID"
_INT_RE = re.compile(r"-?\d+")


@dataclass(frozen=True)
class UnitRow:
    individual_id: str
    sa: Mapping[str, frozenset[str]]
    ca: Mapping[str, frozenset[str]]
    unit: int


@dataclass(frozen=True)
class UnitTable:
    """The mining input: rows of SA values, CA values, and a unit id.

    ``unit_labels`` preserves the original unit spellings when the table was
    loaded from a file whose unitID column held arbitrary labels.
    """

    schema: AttributeSchema
    rows: tuple[UnitRow, ...]
    unit_labels: Mapping[int, str] | None = None

    def unit_label(self, unit: int) -> str:
        if self.unit_labels is not None:
            return self.unit_labels[unit]
        return str(unit)


def build_table(
    dataset: Dataset, assignment: UnitAssignment, date: SnapshotDate | None = None
) -> UnitTable:
    """Join individuals with their units' group features at one snapshot.

    Individuals with no active membership produce no rows. Raises
    UnassignedGroupError if an active edge references a group outside the
    assignment.
    """
    groups = {g.id: g for g in dataset.groups}
    sa_attrs = [a.name for a in dataset.schema.attributes if a.kind == SA]
    ind_ca = [a.name for a in dataset.schema.attributes if a.kind == CA and a.owner == OWNER_INDIVIDUAL]
    grp_ca = [a.name for a in dataset.schema.attributes if a.kind == CA and a.owner == OWNER_GROUP]

    active: dict[str, set[str]] = {}
    for edge in dataset.membership:
        if date is None or edge_active_at(edge, date):
            active.setdefault(edge.individual_id, set()).add(edge.group_id)

    rows: list[UnitRow] = []
    for ind in sorted(dataset.individuals, key=lambda i: i.id):
        gids = active.get(ind.id)
        if not gids:
            continue
        by_unit: dict[int, list[str]] = {}
        for gid in gids:
            unit = assignment.units.get(gid)
            if unit is None:
                raise UnassignedGroupError(f"group {gid!r} has no unit assignment")
            by_unit.setdefault(unit, []).append(gid)
        sa = {a: ind.values[a] for a in sa_attrs if ind.values.get(a)}
        own_ca = {a: ind.values[a] for a in ind_ca if ind.values.get(a)}
        for unit in sorted(by_unit):
            ca = dict(own_ca)
            for a in grp_ca:
                merged: set[str] = set()
                for gid in by_unit[unit]:
                    merged |= groups[gid].values.get(a, frozenset())
                if merged:
                    ca[a] = frozenset(merged)
            rows.append(UnitRow(ind.id, sa, ca, unit))
    return UnitTable(schema=dataset.schema, rows=tuple(rows))


def build_table_from_individual_units(
    dataset: Dataset, assignment: UnitAssignment, date: SnapshotDate | None = None
) -> UnitTable:
    """Unit table for the individual-projection scenario.

    Here units partition the individuals themselves, so each active
    individual yields one row carrying only its own attribute values plus
    its unit id.
    """
    active = {
        e.individual_id
        for e in dataset.membership
        if date is None or edge_active_at(e, date)
    }
    sa_attrs = [a.name for a in dataset.schema.attributes if a.kind == SA]
    ind_ca = [a.name for a in dataset.schema.attributes if a.kind == CA and a.owner == OWNER_INDIVIDUAL]
    rows = []
    for ind in sorted(dataset.individuals, key=lambda i: i.id):
        if ind.id not in active:
            continue
        unit = assignment.units.get(ind.id)
        if unit is None:
            raise UnassignedGroupError(f"individual {ind.id!r} has no unit assignment")
        sa = {a: ind.values[a] for a in sa_attrs if ind.values.get(a)}
        ca = {a: ind.values[a] for a in ind_ca if ind.values.get(a)}
        rows.append(UnitRow(ind.id, sa, ca, unit))
    return UnitTable(schema=dataset.schema, rows=tuple(rows))


def _unit_ids(labels: list[str]) -> dict[str, int]:
    """Dense unit ids from arbitrary labels; numeric labels sort numerically."""
    distinct = sorted(set(labels))
    if all(_INT_RE.fullmatch(v) for v in distinct):
        distinct.sort(key=int)
    return {label: idx for idx, label in enumerate(distinct)}


def load_table(source: Any, schema: AttributeSchema) -> UnitTable:
    """Load a pre-built unit table (the tabular entry point, no clustering).

    Expected header: optional ``id``, every declared attribute, and
    ``unitID``. unitID labels may be arbitrary strings; they are mapped to
    dense integers and kept as labels.
    """
    attr_names = schema.names()
    decls = {a.name: a for a in schema.attributes}
    violations: list[Violation] = []
    rows_iter = read_rows(source)
    try:
        line, header = next(rows_iter)
    except StopIteration:
        raise InputError([Violation(err.MISSING_COLUMN, "empty file, header expected", 1)])
    has_id = bool(header) and header[0] == "id"
    body = header[1:] if has_id else header
    expected = set(attr_names) | {UNIT_COLUMN}
    for name in expected:
        if name not in body:
            violations.append(Violation(err.MISSING_COLUMN, f"column {name!r} missing", line))
    for name in body:
        if name not in expected:
            violations.append(Violation(err.MISSING_COLUMN, f"undeclared column {name!r}", line))
    if len(set(body)) != len(body):
        violations.append(Violation(err.MISSING_COLUMN, "duplicate column in header", line))
    if violations:
        raise InputError(violations)

    raw: list[tuple[str, dict, dict, str]] = []
    for line, row in rows_iter:
        if len(row) != len(header):
            violations.append(
                Violation(err.MALFORMED_ROW, f"expected {len(header)} cells, got {len(row)}", line)
            )
            continue
        cells = dict(zip(header, row))
        ident = cells.get("id") or f"row{len(raw) + 1}"
        sa: dict[str, frozenset[str]] = {}
        ca: dict[str, frozenset[str]] = {}
        bad = False
        for name in attr_names:
            decl = decls[name]
            parts = split_multi(cells[name])
            if decl.multiplicity != MULTI and len(parts) > 1:
                violations.append(
                    Violation(err.MALFORMED_ROW, f"multiple values for single-valued {name!r}", line)
                )
                bad = True
                break
            if parts:
                (sa if decl.kind == SA else ca)[name] = frozenset(parts)
        if bad:
            continue
        if not cells[UNIT_COLUMN]:
            violations.append(Violation(err.MALFORMED_ROW, "empty unitID", line))
            continue
        raw.append((ident, sa, ca, cells[UNIT_COLUMN]))
    if violations:
        raise InputError(violations)

    ids = _unit_ids([label for _, _, _, label in raw])
    rows = tuple(UnitRow(i, sa, ca, ids[label]) for i, sa, ca, label in raw)
    labels = {idx: label for label, idx in ids.items()}
    return UnitTable(schema=schema, rows=rows, unit_labels=labels)


def write_table(table: UnitTable, dest: Any) -> None:
    """Serialize; multi-values are |-joined and sorted for byte-stable output."""
    attr_names = table.schema.names()
    out = [["id"] + attr_names + [UNIT_COLUMN]]
    for row in table.rows:
        cells = [row.individual_id]
        for name in attr_names:
            values = row.sa.get(name) or row.ca.get(name) or ()
            cells.append(join_multi(values))
        cells.append(table.unit_label(row.unit))
        out.append(cells)
    write_rows(dest, out)
