"""Transaction encoding and frequent closed itemset mining with per-unit counts.

Each unit-table row becomes one transaction (a set of attribute=value items;
multi-valued attributes emit one item per value). Mining enumerates the
frequent itemsets by recursive pattern growth over conditional databases of
compressed (distinct) transactions, then keeps the closed ones: an itemset
is closed iff no single-item extension has the same support. Per-unit
transaction counts ride along through every conditional database, because
the cube needs them to form minority/total vectors.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from ._csvio import write_rows
from .schema import SA, AttributeSchema
from .table import UnitTable


@dataclass(frozen=True)
class Item:
    attribute: str
    value: str
    kind: str  # SA | CA

    def __str__(self) -> str:
        return f"{self.attribute}={self.value}"


@dataclass(frozen=True)
class ItemDictionary:
    """Dense, stable item ids: ordered by schema attribute order, then value."""

    items: tuple[Item, ...]
    ids: Mapping[tuple[str, str], int]

    def id_of(self, attribute: str, value: str) -> int:
        return self.ids[(attribute, value)]

    def kind_of(self, item_id: int) -> str:
        return self.items[item_id].kind

    def values_of(self, attribute: str) -> set[str]:
        return {it.value for it in self.items if it.attribute == attribute}

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class Transaction:
    items: frozenset[int]
    unit: int


@dataclass(frozen=True)
class ClosedItemset:
    """A closed itemset with its exact support, bucketed by unit."""

    items: frozenset[int]
    support: int
    per_unit: Mapping[int, int]


def encode(table: UnitTable) -> tuple[list[Transaction], ItemDictionary]:
    """Turn the unit table into a transaction database plus an item dictionary."""
    attr_order = {name: pos for pos, name in enumerate(table.schema.names())}
    pairs: set[tuple[str, str]] = set()
    for row in table.rows:
        for values in (row.sa, row.ca):
            for attr, vset in values.items():
                for v in vset:
                    pairs.add((attr, v))
    ordered = sorted(pairs, key=lambda p: (attr_order[p[0]], p[1]))
    kind = {a.name: a.kind for a in table.schema.attributes}
    items = tuple(Item(a, v, kind[a]) for a, v in ordered)
    ids = {(it.attribute, it.value): i for i, it in enumerate(items)}
    dictionary = ItemDictionary(items=items, ids=ids)

    transactions = []
    for row in table.rows:
        row_items = set()
        for values in (row.sa, row.ca):
            for attr, vset in values.items():
                for v in vset:
                    row_items.add(ids[(attr, v)])
        transactions.append(Transaction(items=frozenset(row_items), unit=row.unit))
    return transactions, dictionary


def _merge(into: dict[int, int], other: Mapping[int, int]) -> None:
    for unit, count in other.items():
        into[unit] = into.get(unit, 0) + count


def mine_closed(transactions: Sequence[Transaction], minsup: int) -> list[ClosedItemset]:
    """Exactly the closed itemsets with support >= minsup, canonically sorted.

    The empty itemset is included iff it is closed (no item occurs in every
    transaction); it carries the all-star cube coordinates with support equal
    to the transaction count. Output order is (size, item ids), independent
    of input order.
    """
    if minsup < 1:
        raise ValueError("minsup must be >= 1")

    # Compress to distinct item sets; per-unit multiplicities ride along.
    grouped: dict[frozenset[int], dict[int, int]] = {}
    for t in transactions:
        units = grouped.setdefault(t.items, {})
        units[t.unit] = units.get(t.unit, 0) + 1
    base = [
        (tuple(sorted(items)), sum(units.values()), units)
        for items, units in grouped.items()
    ]

    # freq maps every frequent itemset (as a sorted tuple) to its counts.
    freq: dict[tuple[int, ...], tuple[int, dict[int, int]]] = {}

    def grow(db: list[tuple[tuple[int, ...], int, Mapping[int, int]]], prefix: tuple[int, ...]) -> None:
        occurrences: dict[int, list[tuple[tuple[int, ...], int, Mapping[int, int]]]] = {}
        for tail, count, units in db:
            for pos, item in enumerate(tail):
                occurrences.setdefault(item, []).append((tail[pos + 1 :], count, units))
        for item in sorted(occurrences):
            entries = occurrences[item]
            support = sum(count for _, count, _ in entries)
            if support < minsup:
                continue
            per_unit: dict[int, int] = {}
            for _, _, units in entries:
                _merge(per_unit, units)
            itemset = prefix + (item,)
            freq[itemset] = (support, per_unit)
            grow(entries, itemset)

    grow(base, ())

    single_items = [key[0] for key in freq if len(key) == 1]
    out: list[ClosedItemset] = []

    total = len(transactions)
    if total >= minsup:
        if all(freq.get((e,), (0, None))[0] < total for e in single_items):
            per_unit_all: dict[int, int] = {}
            for _, _, units in base:
                _merge(per_unit_all, units)
            out.append(ClosedItemset(frozenset(), total, per_unit_all))

    for itemset, (support, per_unit) in freq.items():
        closed = True
        members = set(itemset)
        for e in single_items:
            if e in members:
                continue
            ext = freq.get(tuple(sorted(itemset + (e,))))
            if ext is not None and ext[0] == support:
                closed = False
                break
        if closed:
            out.append(ClosedItemset(frozenset(itemset), support, per_unit))

    out.sort(key=lambda ci: (len(ci.items), sorted(ci.items)))
    return out


def split_coordinates(
    itemset: ClosedItemset | Iterable[int], dictionary: ItemDictionary
) -> tuple[frozenset[int], frozenset[int]]:
    """Partition an itemset into (SA items, CA items)."""
    ids = itemset.items if isinstance(itemset, ClosedItemset) else frozenset(itemset)
    sa = frozenset(i for i in ids if dictionary.kind_of(i) == SA)
    return sa, ids - sa


def dump_itemsets(closed: Iterable[ClosedItemset], dictionary: ItemDictionary, dest: Any) -> None:
    """Debug export: items;support;unit:count,... one line per closed itemset."""
    rows = [["items", "support", "perUnit"]]
    for ci in closed:
        names = ";".join(str(dictionary.items[i]) for i in sorted(ci.items))
        units = ",".join(f"{u}:{c}" for u, c in sorted(ci.per_unit.items()))
        rows.append([names, str(ci.support), units])
    write_rows(dest, rows)
