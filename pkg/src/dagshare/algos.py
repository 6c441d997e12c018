"""Spanning-arborescence, shortest-path and depth primitives.

Every routine is deterministic: each tie is broken by an explicit rule, so
repeated runs over equal inputs produce identical structures.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import Unreachable
from .model import Edge, InducedGraph

ZERO = Fraction(0)


@dataclass(frozen=True)
class Arborescence:
    """A tree of entering edges directed away from ``root``.

    ``entering_edge`` maps every covered node (the root excluded) to its
    unique incoming edge; ``entering_cost`` carries that edge's weight.
    """

    root: str
    entering_edge: Mapping[str, Edge]
    entering_cost: Mapping[str, Fraction]
    total_cost: Fraction

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(self.entering_edge.values())

    @property
    def covered(self) -> frozenset[str]:
        return frozenset(self.entering_edge) | {self.root}


def prim_arborescence(graph: InducedGraph) -> Arborescence:
    """Greedy rooted growth: repeatedly attach the cheapest edge leaving the
    covered set, ties broken by (weight, head node, tail node).

    Covers exactly the reachable set.  On directed graphs this greedy tree
    is not always the cheapest spanning arborescence; compare with
    ``exact_min_arborescence`` when optimality matters.
    """
    covered = {graph.source}
    entering_edge: dict[str, Edge] = {}
    entering_cost: dict[str, Fraction] = {}
    heap: list[tuple[Fraction, str, str]] = []

    def push_from(u: str) -> None:
        for v, w in graph.out(u):
            if v not in covered:
                heapq.heappush(heap, (w, v, u))

    push_from(graph.source)
    while heap:
        w, v, u = heapq.heappop(heap)
        if v in covered:
            continue
        covered.add(v)
        entering_edge[v] = (u, v)
        entering_cost[v] = w
        push_from(v)
    total = sum(entering_cost.values(), ZERO)
    return Arborescence(graph.source, entering_edge, entering_cost, total)


def exact_min_arborescence(graph: InducedGraph) -> Arborescence:
    """The cheapest spanning arborescence over the reachable set.

    Acyclicity makes the per-node choices independent: giving every
    reachable node its cheapest entering edge (from another reachable node)
    can close no cycle, and each predecessor chain must end at the source,
    so the independent minima are jointly optimal.  No cycle contraction is
    needed.
    """
    entering_edge: dict[str, Edge] = {}
    entering_cost: dict[str, Fraction] = {}
    for v in sorted(graph.reachable - {graph.source}):
        w, u = min((w, u) for u, w in graph.parents(v) if u in graph.reachable)
        entering_edge[v] = (u, v)
        entering_cost[v] = w
    total = sum(entering_cost.values(), ZERO)
    return Arborescence(graph.source, entering_edge, entering_cost, total)


def bfs_depths(graph: InducedGraph) -> dict[str, int]:
    """Hop-count distance from the source for every reachable node.

    The source maps to 0; unreachable nodes are absent.
    """
    depths = {graph.source: 0}
    frontier = [graph.source]
    while frontier:
        nxt: list[str] = []
        for u in frontier:
            for v, _ in graph.out(u):
                if v not in depths:
                    depths[v] = depths[u] + 1
                    nxt.append(v)
        frontier = nxt
    return depths


class CostView:
    """A mutable overlay over a graph's weights supporting edge zeroing.

    Confined to a single mechanism evaluation; the underlying graph is
    never modified.
    """

    def __init__(self, graph: InducedGraph):
        self._graph = graph
        self._zeroed: set[Edge] = set()

    def weight(self, edge: Edge) -> Fraction:
        return ZERO if edge in self._zeroed else self._graph.weights[edge]

    def zero(self, edge: Edge) -> None:
        self._zeroed.add(edge)

    def is_zeroed(self, edge: Edge) -> bool:
        return edge in self._zeroed

    @property
    def zeroed(self) -> frozenset[Edge]:
        return frozenset(self._zeroed)


@dataclass(frozen=True)
class PathResult:
    """A cheapest directed path from the source to ``target``."""

    target: str
    cost: Fraction
    edges: tuple[Edge, ...]
    nodes: tuple[str, ...]


def shortest_path_from_source(
    costs: CostView | None, graph: InducedGraph, target: str
) -> PathResult:
    """Minimum-cost directed path from the source to ``target`` under the
    current (possibly partially zeroed) weights.

    Among equal-cost paths the lexicographically smallest node sequence
    wins.  Dijkstra labels are (cost, node sequence) pairs; appending a node
    preserves their order, so the composite key is itself Dijkstra-monotone.
    """
    if target not in graph.reachable:
        raise Unreachable(f"no directed path from {graph.source!r} to {target!r}")
    weight = costs.weight if costs is not None else graph.weights.__getitem__
    start = (ZERO, (graph.source,))
    best: dict[str, tuple[Fraction, tuple[str, ...]]] = {graph.source: start}
    heap = [start]
    while heap:
        cost, path = heapq.heappop(heap)
        node = path[-1]
        if best[node] < (cost, path):
            continue
        if node == target:
            edges = tuple(zip(path, path[1:]))
            return PathResult(target, cost, edges, path)
        for v, _ in graph.out(node):
            candidate = (cost + weight((node, v)), path + (v,))
            if v not in best or candidate < best[v]:
                best[v] = candidate
                heapq.heappush(heap, candidate)
    raise Unreachable(f"no directed path from {graph.source!r} to {target!r}")
