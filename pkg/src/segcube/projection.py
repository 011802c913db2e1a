"""One-mode projection of the individual-group affiliation graph.

Projects the bipartite membership graph, restricted to the edges active at a
snapshot date, onto a weighted unipartite graph over groups: two groups are
connected iff they share at least one active individual, and the edge weight
is the exact count of shared individuals.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable, Mapping

from ._csvio import write_rows
from .errors import SegcubeError
from .schema import MembershipEdge, SnapshotDate, edge_active_at

log = logging.getLogger(__name__)

# Individuals sitting on very many boards dominate projection cost; warn when
# a single individual contributes more than this many pairs.
PAIR_WARN_THRESHOLD = 10_000


class PairBudgetExceeded(SegcubeError):
    """A single individual produced more pairs than the configured cap."""


@dataclass(frozen=True)
class ProjectedGraph:
    """Weighted unipartite graph over groups.

    ``weights`` is keyed by ordered pairs (a, b) with a < b lexicographically;
    ``isolated`` holds the degree-zero nodes. Every group of the snapshot
    appears either as an edge endpoint or in ``isolated``.
    """

    nodes: frozenset[str]
    weights: Mapping[tuple[str, str], int]
    isolated: frozenset[str]

    def sorted_edges(self) -> list[tuple[str, str, int]]:
        return [(a, b, self.weights[(a, b)]) for a, b in sorted(self.weights)]

    def neighbors(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {n: [] for n in self.nodes}
        for a, b in self.weights:
            adj[a].append(b)
            adj[b].append(a)
        return adj


@dataclass(frozen=True)
class DegreeStats:
    nodes: int
    edges: int
    isolated: int
    max_weight: int
    mean_weight: float


def project(
    membership: Iterable[MembershipEdge],
    all_groups: Iterable[str],
    date: SnapshotDate | None = None,
    *,
    max_pairs_per_individual: int | None = None,
) -> ProjectedGraph:
    """Project the membership edges active at *date* onto the group side.

    ``date=None`` keeps every edge (useful for undated datasets). The
    accumulation is a commutative integer sum keyed by ordered pair, so the
    result does not depend on edge order.
    """
    groups_of: dict[str, set[str]] = {}
    for edge in membership:
        if date is None or edge_active_at(edge, date):
            groups_of.setdefault(edge.individual_id, set()).add(edge.group_id)

    weights: dict[tuple[str, str], int] = {}
    for ind, gset in groups_of.items():
        k = len(gset)
        npairs = k * (k - 1) // 2
        if npairs > PAIR_WARN_THRESHOLD:
            log.warning("individual %s spans %d groups (%d pairs)", ind, k, npairs)
        if max_pairs_per_individual is not None and npairs > max_pairs_per_individual:
            raise PairBudgetExceeded(
                f"individual {ind!r} would add {npairs} pairs (cap {max_pairs_per_individual})"
            )
        for pair in combinations(sorted(gset), 2):
            weights[pair] = weights.get(pair, 0) + 1

    nodes = frozenset(all_groups)
    touched = {g for pair in weights for g in pair}
    return ProjectedGraph(nodes=nodes, weights=weights, isolated=frozenset(nodes - touched))


def swap_sides(membership: Iterable[MembershipEdge]) -> list[MembershipEdge]:
    """Transpose the bipartite edges so individuals become the projected side."""
    return [
        MembershipEdge(e.group_id, e.individual_id, e.start, e.end) for e in membership
    ]


def degree_stats(graph: ProjectedGraph) -> DegreeStats:
    ws = list(graph.weights.values())
    return DegreeStats(
        nodes=len(graph.nodes),
        edges=len(ws),
        isolated=len(graph.isolated),
        max_weight=max(ws) if ws else 0,
        mean_weight=sum(ws) / len(ws) if ws else 0.0,
    )


def write_edges(graph: ProjectedGraph, dest: Any) -> None:
    rows = [["groupA", "groupB", "weight"]]
    rows += [[a, b, str(w)] for a, b, w in graph.sorted_edges()]
    write_rows(dest, rows)


def write_isolated(graph: ProjectedGraph, dest: Any) -> None:
    rows = [["groupID"]] + [[g] for g in sorted(graph.isolated)]
    write_rows(dest, rows)
