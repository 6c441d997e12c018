"""Shared test utilities: the seeded sweep, fixture loading and independent
reference computations used as oracles."""

from __future__ import annotations

import heapq
from fractions import Fraction
from itertools import permutations

import dagshare as ds

SWEEP_DENSITIES = (0.25, 0.5, 0.75)
SWEEP_COST_RANGE = (1, 20)
SWEEP_MAX_AGENTS = 8


def sweep_instances(count: int = 100, max_agents: int = SWEEP_MAX_AGENTS):
    """The documented acceptance sweep: seeds 1..count with cycling sizes,
    contractor counts and densities."""
    for seed in range(1, count + 1):
        n_nodes = (seed - 1) % max_agents + 1
        n_contractors = 2 + seed % 2
        density = SWEEP_DENSITIES[seed % 3]
        yield seed, ds.generate_instance(
            seed=seed,
            n_nodes=n_nodes,
            n_contractors=n_contractors,
            edge_density=density,
            cost_range=SWEEP_COST_RANGE,
        )


def load_fixture(name: str) -> ds.Instance:
    instance = ds.parse_instance(ds.fixture_path(name).read_text(encoding="utf-8"))
    ds.validate_instance(instance)
    return instance


def reachable_by_search(source: str, edges) -> frozenset[str]:
    """Plain breadth-first reachability, independent of the model code."""
    out: dict[str, list[str]] = {}
    for u, v in edges:
        out.setdefault(u, []).append(v)
    seen = {source}
    stack = [source]
    while stack:
        u = stack.pop()
        for v in out.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return frozenset(seen)


def dist_between(graph: ds.InducedGraph, start: str, goal: str) -> Fraction | None:
    """Original-weight shortest-path cost from any node to any node, by a
    self-contained Dijkstra (used to cross-check the residual-path costs)."""
    dist = {start: Fraction(0)}
    heap = [(Fraction(0), start)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, None if u not in dist else dist[u]):
            continue
        if u == goal:
            return d
        for v, w in graph.out(u):
            nd = d + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist.get(goal)


def permutation_shapley(members, value) -> dict[str, Fraction]:
    """Average marginal contribution over every ordering: the textbook
    definition, used as an independent oracle for small member counts."""
    members = sorted(members)
    totals = {m: Fraction(0) for m in members}
    count = 0
    for order in permutations(members):
        count += 1
        seen: set[str] = set()
        previous = Fraction(0)
        for member in order:
            seen.add(member)
            current = value(frozenset(seen))
            totals[member] += current - previous
            previous = current
    return {m: t / count for m, t in totals.items()}
