"""Partitioning of the projected graph into organizational units.

Two methods: plain connected components (BFS), and a thresholded variant
that deletes the giant component's weak edges (weight strictly below the
threshold) before recomputing components. Unit numbering is canonical:
units are sorted by their lexicographically smallest member and numbered
0..n-1, so the output never depends on edge order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any, Mapping

from ._csvio import write_rows
from .projection import ProjectedGraph

CC = "cc"
THRESHOLD_CC = "threshold_cc"


@dataclass(frozen=True)
class UnitAssignment:
    """Total mapping group id -> dense unit id, plus how it was produced."""

    units: Mapping[str, int]
    method: str
    min_weight: int | None = None

    @property
    def unit_count(self) -> int:
        return len(set(self.units.values()))

    def members(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for node, unit in self.units.items():
            out.setdefault(unit, []).append(node)
        return {u: sorted(ms) for u, ms in sorted(out.items())}


def _components(nodes: frozenset[str], adjacency: dict[str, list[str]]) -> list[set[str]]:
    seen: set[str] = set()
    components: list[set[str]] = []
    for start in sorted(nodes):
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for nb in adjacency.get(node, ()):
                if nb not in comp:
                    comp.add(nb)
                    seen.add(nb)
                    queue.append(nb)
        components.append(comp)
    return components


def _canonical(components: list[set[str]], method: str, min_weight: int | None) -> UnitAssignment:
    ordered = sorted(components, key=min)
    units = {node: idx for idx, comp in enumerate(ordered) for node in comp}
    return UnitAssignment(units=units, method=method, min_weight=min_weight)


def connected_components(graph: ProjectedGraph) -> UnitAssignment:
    """One unit per connected component; isolated nodes become singletons."""
    return _canonical(_components(graph.nodes, graph.neighbors()), CC, None)


def threshold_components(graph: ProjectedGraph, min_weight: int) -> UnitAssignment:
    """Shatter the giant component by dropping its edges with weight < min_weight.

    Single pass: components are computed, the giant one (largest node count,
    ties broken by smallest member id) has its sub-threshold edges removed,
    and components are recomputed over the whole graph. Components other than
    the giant one are left untouched. ``min_weight=1`` removes nothing and
    equals plain connected components.
    """
    if min_weight < 1:
        raise ValueError("min_weight must be >= 1")
    components = _components(graph.nodes, graph.neighbors())
    if not components:
        return _canonical([], THRESHOLD_CC, min_weight)
    giant = min(components, key=lambda c: (-len(c), min(c)))
    kept_adj: dict[str, list[str]] = {n: [] for n in graph.nodes}
    for (a, b), w in graph.weights.items():
        if a in giant and w < min_weight:
            continue
        kept_adj[a].append(b)
        kept_adj[b].append(a)
    return _canonical(_components(graph.nodes, kept_adj), THRESHOLD_CC, min_weight)


def write_node_unit(assignment: UnitAssignment, dest: Any) -> None:
    rows = [["groupID", "unitID"]]
    rows += [[node, str(unit)] for node, unit in sorted(assignment.units.items())]
    write_rows(dest, rows)
