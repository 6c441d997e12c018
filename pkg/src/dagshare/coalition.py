"""Coalition connection values and exact Shapley shares.

The value of a coalition is the minimum total weight of an edge set that
gives every member a directed path from the source.  Routing through nodes
outside the coalition is allowed, so the optimum touches some superset of
the coalition.  For a fixed touched set, acyclicity reduces the cheapest
connector to independent per-node entering-edge minima; values for every
coalition then come from one pass over node subsets followed by a
superset-minimum sweep.  All arithmetic is exact: weights are rescaled to
integers internally and converted back to Fractions on the way out.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InfeasibleParameters, TooManyNodes, UnknownNode, UnreachableMember
from .model import InducedGraph

MAX_COALITION_NODES = 16
DEFAULT_SHAPLEY_LIMIT = 12


def _int_scaled_weights(graph: InducedGraph) -> tuple[dict, int]:
    """Weights as integers plus the common denominator used to scale them."""
    scale = math.lcm(*(w.denominator for w in graph.weights.values())) if graph.weights else 1
    return {e: int(w * scale) for e, w in graph.weights.items()}, scale


class CoalitionOracle:
    """Exact coalition values (and Shapley shares) for one induced graph.

    The full value table is computed once at construction; lookups are then
    O(1).  Safe for concurrent use: the object is immutable after
    ``__init__``.
    """

    def __init__(self, graph: InducedGraph, *, limit: int = MAX_COALITION_NODES):
        self._graph = graph
        members = tuple(sorted(graph.reachable_agents))
        if len(members) > limit:
            raise TooManyNodes(
                f"{len(members)} reachable agent nodes exceed the enumeration limit {limit}"
            )
        self._members = members
        self._bit = {node: 1 << i for i, node in enumerate(members)}
        weights, self._scale = _int_scaled_weights(graph)

        # per member: entering edges sorted by weight, tails encoded as bits
        # (0 for the source); tails outside the reachable set can never join
        # a connector and are dropped.
        parents: list[list[tuple[int, int]]] = []
        for node in members:
            options = []
            for u, _ in graph.parents(node):
                if u == graph.source:
                    options.append((weights[(u, node)], 0))
                elif u in graph.reachable:
                    options.append((weights[(u, node)], self._bit[u]))
            options.sort()
            parents.append(options)

        n = len(members)
        size = 1 << n
        infinity = sum(sum(w for w, _ in opts) for opts in parents) + 1
        values = [0] * size
        for mask in range(1, size):
            total = 0
            rest = mask
            while rest:
                low = rest & -rest
                rest ^= low
                for w, tail in parents[low.bit_length() - 1]:
                    if tail == 0 or tail & mask:
                        total += w
                        break
                else:
                    total = infinity
                    break
            values[mask] = min(total, infinity)
        # v(S) = min over touched supersets U of the fixed-set connector cost
        for b in range(n):
            bit = 1 << b
            for mask in range(size):
                if not mask & bit and values[mask | bit] < values[mask]:
                    values[mask] = values[mask | bit]
        self._values = values

    @property
    def members(self) -> tuple[str, ...]:
        return self._members

    def _mask(self, coalition: Iterable[str]) -> int:
        mask = 0
        for node in coalition:
            bit = self._bit.get(node)
            if bit is None:
                if node in self._graph.nodes:
                    raise UnreachableMember(f"node {node!r} is not reachable from the source")
                raise UnknownNode(f"no such node: {node!r}")
            mask |= bit
        return mask

    def value(self, coalition: Iterable[str]) -> Fraction:
        return Fraction(self._values[self._mask(coalition)], self._scale)

    def total_value(self) -> Fraction:
        return Fraction(self._values[(1 << len(self._members)) - 1], self._scale)

    def shapley(self, *, limit: int = DEFAULT_SHAPLEY_LIMIT) -> dict[str, Fraction]:
        """Average marginal connection cost of each reachable agent node.

        phi_i = sum over S not containing i of
        |S|! (n-|S|-1)! / n! * (v(S + i) - v(S)), with n the number of
        reachable agents.  Marginals are accumulated as integers per
        coalition size, so only n Fraction operations happen per node.
        """
        n = len(self._members)
        if n > limit:
            raise TooManyNodes(
                f"{n} reachable agent nodes exceed the enumeration limit {limit}"
            )
        if n == 0:
            return {}
        values = self._values
        full = (1 << n) - 1
        by_size = [[0] * n for _ in range(n)]
        popcount = [0] * (full + 1)
        for mask in range(1, full + 1):
            popcount[mask] = popcount[mask >> 1] + (mask & 1)
        for mask in range(full + 1):
            base = values[mask]
            size = popcount[mask]
            rest = full & ~mask
            while rest:
                low = rest & -rest
                rest ^= low
                by_size[low.bit_length() - 1][size] += values[mask | low] - base
        fact = [math.factorial(k) for k in range(n + 1)]
        out: dict[str, Fraction] = {}
        for i, node in enumerate(self._members):
            numerator = sum(
                fact[s] * fact[n - s - 1] * by_size[i][s] for s in range(n)
            )
            out[node] = Fraction(numerator, fact[n] * self._scale)
        return out


def coalition_value(
    graph: InducedGraph, coalition: Iterable[str], *, oracle: CoalitionOracle | None = None
) -> Fraction:
    """Minimum cost of connecting every coalition member to the source."""
    if oracle is None:
        oracle = CoalitionOracle(graph)
    return oracle.value(coalition)


def shapley_values(
    graph: InducedGraph, *, limit: int = DEFAULT_SHAPLEY_LIMIT
) -> dict[str, Fraction]:
    """Exact Shapley vector over the reachable agent nodes."""
    return CoalitionOracle(graph).shapley(limit=limit)


def coalition_value_bruteforce(
    graph: InducedGraph, coalition: Iterable[str], *, max_edges: int = 18
) -> Fraction:
    """Reference value by scanning every edge subset.

    Deliberately independent of CoalitionOracle: each subset's reachable set
    is recomputed by plain propagation and the cheapest subset covering the
    coalition wins.
    """
    wanted = frozenset(coalition)
    for node in wanted:
        if node not in graph.nodes:
            raise UnknownNode(f"no such node: {node!r}")
        if node not in graph.reachable:
            raise UnreachableMember(f"node {node!r} is not reachable from the source")
    if not wanted:
        return Fraction(0)
    edges = list(graph.edges)
    if len(edges) > max_edges:
        raise InfeasibleParameters(f"{len(edges)} edges is too many for a subset scan")
    best: Fraction | None = None
    for mask in range(1 << len(edges)):
        chosen = [edges[i] for i in range(len(edges)) if mask >> i & 1]
        cost = sum((graph.weights[e] for e in chosen), Fraction(0))
        if best is not None and cost >= best:
            continue
        reach = {graph.source}
        grew = True
        while grew:
            grew = False
            for u, v in chosen:
                if u in reach and v not in reach:
                    reach.add(v)
                    grew = True
        if wanted <= reach:
            best = cost
    assert best is not None  # the full edge set always connects the coalition
    return best


def bruteforce_coalition_table(
    graph: InducedGraph, *, max_edges: int = 20
) -> dict[frozenset[str], Fraction]:
    """Brute-force values for every coalition of reachable agents at once.

    One pass over all edge subsets records the cheapest subset per exact
    reachable node set; each coalition's value is then the cheapest entry
    covering it.  A subset's cost and reachable set both extend those of
    the subset minus its lowest edge, so the pass stays near O(1) per
    subset without touching the per-node-minimum logic of CoalitionOracle.
    """
    edges = list(graph.edges)
    n_edges = len(edges)
    if n_edges > max_edges:
        raise InfeasibleParameters(f"{n_edges} edges is too many for a subset scan")
    weights, scale = _int_scaled_weights(graph)
    node_bit = {name: 1 << i for i, name in enumerate((graph.source,) + graph.nodes)}
    tails = [node_bit[u] for u, _ in edges]
    heads = [node_bit[v] for _, v in edges]
    costs_int = [weights[e] for e in edges]
    agents_mask = 0
    for name in graph.reachable_agents:
        agents_mask |= node_bit[name]

    size = 1 << n_edges
    cost = [0] * size
    reach = [node_bit[graph.source]] * size
    cheapest: dict[int, int] = {0: 0}
    edge_index = {1 << i: i for i in range(n_edges)}
    for mask in range(1, size):
        low = mask & -mask
        i = edge_index[low]
        rest = mask ^ low
        cost[mask] = cost[rest] + costs_int[i]
        r = reach[rest]
        if r & tails[i] and not r & heads[i]:
            r |= heads[i]
            grew = True
            while grew:
                grew = False
                probe = mask
                while probe:
                    b = probe & -probe
                    probe ^= b
                    j = edge_index[b]
                    if r & tails[j] and not r & heads[j]:
                        r |= heads[j]
                        grew = True
        reach[mask] = r
        covered = r & agents_mask
        best = cheapest.get(covered)
        if best is None or cost[mask] < best:
            cheapest[covered] = cost[mask]

    table: dict[frozenset[str], Fraction] = {}
    members = sorted(graph.reachable_agents)
    for mask in range(1 << len(members)):
        coalition_mask = 0
        coalition = []
        for i, name in enumerate(members):
            if mask >> i & 1:
                coalition.append(name)
                coalition_mask |= node_bit[name]
        value = min(
            c for covered, c in cheapest.items() if covered & coalition_mask == coalition_mask
        )
        table[frozenset(coalition)] = Fraction(value, scale)
    return table
