"""Builds the multi-dimensional segregation data cube from closed itemsets.

A cell is keyed by SA coordinates A (the minority subgroup) and CA
coordinates B (the context). The cell's total population vector t_i counts
the transactions per unit covering B (taken from the closure of B, which
covers exactly the same transactions), and its minority vector m_i counts
the transactions per unit covering A and B together. Segregation indexes are
never aggregated from child cells: every cell value is computed from its own
counts, because the indexes are not additive.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import UnknownAttributeError, UnknownValueError
from .indexes import (
    ALL_INDEXES,
    DEFAULT_ATKINSON_B,
    CountsVector,
    IndexKind,
    compute_indexes,
)
from .mining import ClosedItemset, ItemDictionary, split_coordinates
from .schema import AttributeSchema

STAR = "*"

Coordinates = Mapping[str, tuple[str, ...]]


@dataclass(frozen=True)
class CubeCell:
    """One cube cell: coordinates, aligned per-unit counts, index values.

    Coordinate maps cover every SA (resp. CA) attribute; an empty value tuple
    is the roll-up star. ``values`` maps index code to a float, or None when
    the cell is undefined (M=0 or M=T).
    """

    coords_sa: Coordinates
    coords_ca: Coordinates
    units: tuple[int, ...]
    totals: tuple[int, ...]
    minority: tuple[int, ...]
    values: Mapping[str, float | None]

    @property
    def T(self) -> int:
        return sum(self.totals)

    @property
    def M(self) -> int:
        return sum(self.minority)

    @property
    def n(self) -> int:
        return len(self.units)

    def coordinate(self, attribute: str) -> tuple[str, ...]:
        if attribute in self.coords_sa:
            return self.coords_sa[attribute]
        return self.coords_ca[attribute]


@dataclass(frozen=True)
class SegregationCube:
    """All materialized cells for one snapshot plus build parameters."""

    schema: AttributeSchema
    cells: tuple[CubeCell, ...]
    indexes: tuple[IndexKind, ...]
    minsup: int
    atkinson_b: float
    snapshot: dt.date | None = None
    clustering_method: str | None = None
    clustering_min_weight: int | None = None
    known_values: Mapping[str, frozenset[str]] = field(default_factory=dict)
    skipped_contexts: int = 0


def coordinate_text(values: tuple[str, ...]) -> str:
    return "|".join(values) if values else STAR


def cell_key(cell: CubeCell, schema: AttributeSchema) -> tuple[str, ...]:
    """Canonical sort key: coordinate text per attribute in schema order."""
    return tuple(coordinate_text(cell.coordinate(name)) for name in schema.names())


def cell_label(cell: CubeCell, schema: AttributeSchema) -> str:
    """Human-readable coordinates, non-star only: ``attr=v1|v2, attr=v``."""
    parts = [
        f"{name}={'|'.join(cell.coordinate(name))}"
        for name in schema.names()
        if cell.coordinate(name)
    ]
    return ", ".join(parts) if parts else "(all)"


def _coords(item_ids: Iterable[int], dictionary: ItemDictionary, names: list[str]) -> dict[str, tuple[str, ...]]:
    by_attr: dict[str, list[str]] = {name: [] for name in names}
    for i in item_ids:
        item = dictionary.items[i]
        by_attr[item.attribute].append(item.value)
    return {name: tuple(sorted(vals)) for name, vals in by_attr.items()}


def _closure_lookup(closed: Sequence[ClosedItemset]):
    """Return a function mapping an itemset to its closure's ClosedItemset.

    The closure of B is the unique closed superset of B covering exactly the
    same transactions; among the closed supersets it is the one of maximum
    support. Lookups use an inverted item index, with the empty set resolving
    to the globally most supported closed set.
    """
    by_set = {ci.items: ci for ci in closed}
    containing: dict[int, set[int]] = {}
    for pos, ci in enumerate(closed):
        for item in ci.items:
            containing.setdefault(item, set()).add(pos)

    def lookup(items: frozenset[int]) -> ClosedItemset | None:
        if items in by_set:
            return by_set[items]
        if not items:
            return max(closed, key=lambda ci: ci.support) if closed else None
        candidate_pos: set[int] | None = None
        for item in items:
            pos = containing.get(item)
            if pos is None:
                return None
            candidate_pos = set(pos) if candidate_pos is None else candidate_pos & pos
            if not candidate_pos:
                return None
        best = max(candidate_pos, key=lambda p: closed[p].support)
        return closed[best]

    return lookup


def build_cube(
    closed: Sequence[ClosedItemset],
    dictionary: ItemDictionary,
    schema: AttributeSchema,
    *,
    minsup: int,
    indexes: Iterable[IndexKind] = ALL_INDEXES,
    atkinson_b: float = DEFAULT_ATKINSON_B,
    snapshot: dt.date | None = None,
    clustering_method: str | None = None,
    clustering_min_weight: int | None = None,
) -> SegregationCube:
    """Scan closed itemsets and emit one cell per itemset with a minority part.

    Itemsets whose SA part is empty designate no minority and are skipped,
    except that a single all-star cell (undefined indexes, M = T) is emitted
    from the closure of the empty itemset so roll-up navigation always has a
    root. A missing context closure (possible only when context support was
    pruned harder than cell support) skips the cell and bumps the skip count.
    """
    kinds = tuple(indexes)
    sa_names = schema.sa_names()
    ca_names = schema.ca_names()
    closure_of = _closure_lookup(closed)
    cells: list[CubeCell] = []
    skipped = 0

    root = closure_of(frozenset())
    if root is not None:
        units = tuple(sorted(root.per_unit))
        totals = tuple(root.per_unit[u] for u in units)
        cells.append(
            CubeCell(
                coords_sa={name: () for name in sa_names},
                coords_ca={name: () for name in ca_names},
                units=units,
                totals=totals,
                minority=totals,
                values={k.value: None for k in kinds},
            )
        )

    for ci in closed:
        sa_items, ca_items = split_coordinates(ci, dictionary)
        if not sa_items:
            continue
        context = closure_of(ca_items)
        if context is None:
            skipped += 1
            continue
        units = tuple(sorted(context.per_unit))
        totals = tuple(context.per_unit[u] for u in units)
        minority = tuple(ci.per_unit.get(u, 0) for u in units)
        counts = CountsVector.from_counts(minority, totals)
        cells.append(
            CubeCell(
                coords_sa=_coords(sa_items, dictionary, sa_names),
                coords_ca=_coords(ca_items, dictionary, ca_names),
                units=units,
                totals=totals,
                minority=minority,
                values=compute_indexes(counts, kinds, atkinson_b),
            )
        )

    cells.sort(key=lambda c: cell_key(c, schema))
    known = {
        name: frozenset(dictionary.values_of(name)) for name in schema.names()
    }
    return SegregationCube(
        schema=schema,
        cells=tuple(cells),
        indexes=kinds,
        minsup=minsup,
        atkinson_b=atkinson_b,
        snapshot=snapshot,
        clustering_method=clustering_method,
        clustering_min_weight=clustering_min_weight,
        known_values=known,
        skipped_contexts=skipped,
    )


def _normalize_coordinate(value) -> tuple[str, ...]:
    if value is None:
        return ()
    if isinstance(value, str):
        if value == STAR or value == "":
            return ()
        return tuple(sorted(value.split("|")))
    return tuple(sorted(value))


def query_cell(cube: SegregationCube, coords: Mapping[str, object]) -> CubeCell | None:
    """Exact-match cell lookup; star (or omitted) coordinates match roll-ups.

    Returns None when no cell exists at those coordinates, which means the
    combination was pruned by support or is not a closed coordinate set.
    """
    names = set(cube.schema.names())
    for attr in coords:
        if attr not in names:
            raise UnknownAttributeError(f"unknown attribute {attr!r}")
    wanted: dict[str, tuple[str, ...]] = {}
    for attr in cube.schema.names():
        values = _normalize_coordinate(coords.get(attr))
        known = cube.known_values.get(attr, frozenset())
        for v in values:
            if v not in known:
                raise UnknownValueError(f"value {v!r} never occurs for attribute {attr!r}")
        wanted[attr] = values
    for cell in cube.cells:
        if all(cell.coordinate(attr) == values for attr, values in wanted.items()):
            return cell
    return None


def top_k(
    cube: SegregationCube,
    index: IndexKind,
    k: int,
    min_population: int = 0,
) -> list[CubeCell]:
    """Cells ranked by descending index value.

    Undefined cells and cells below the population floor are excluded; ties
    break toward larger T, then canonical coordinate order.
    """
    code = index.value
    ranked = [
        c
        for c in cube.cells
        if c.values.get(code) is not None and c.T >= min_population
    ]
    ranked.sort(key=lambda c: (-c.values[code], -c.T, cell_key(c, cube.schema)))
    return ranked[: max(k, 0)]
