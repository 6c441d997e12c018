"""Seeded random instance generation.

Edges only run from lower to higher position in a fixed node order, which
guarantees acyclicity, and every node receives at least one edge from an
earlier node (or the source), which guarantees reachability.  The same
arguments always produce the same instance.
"""

from __future__ import annotations

import random
import string
from fractions import Fraction

from .errors import InfeasibleParameters
from .model import Edge, Instance


def generate_instance(
    seed: int,
    n_nodes: int,
    n_contractors: int = 2,
    edge_density: float = 0.5,
    cost_range: tuple[int, int] = (1, 20),
) -> Instance:
    """A valid random instance, deterministic in all arguments.

    ``edge_density`` is the probability of each optional forward edge;
    density 1 yields the complete DAG over the generated order.  Costs are
    integers drawn uniformly from ``cost_range``, independently per
    contractor and edge.
    """
    if n_nodes < 1:
        raise InfeasibleParameters("need at least one agent node")
    if n_contractors < 2:
        raise InfeasibleParameters("need at least two contractors")
    if n_contractors > len(string.ascii_lowercase):
        raise InfeasibleParameters("at most 26 contractors are supported")
    if not 0.0 <= edge_density <= 1.0:
        raise InfeasibleParameters("edge_density must lie in [0, 1]")
    lo, hi = cost_range
    if lo < 1 or hi < lo:
        raise InfeasibleParameters("cost_range must satisfy 1 <= lo <= hi")

    rng = random.Random(seed)
    source = "s"
    width = len(str(n_nodes))
    order = [f"v{i + 1:0{width}d}" for i in range(n_nodes)]

    edges: list[Edge] = []
    for i, node in enumerate(order):
        pool = [source] + order[:i]
        forced = rng.choice(pool)
        edges.append((forced, node))
        for parent in pool:
            if parent != forced and rng.random() < edge_density:
                edges.append((parent, node))
    edges.sort()

    contractors = {}
    for cid in string.ascii_lowercase[:n_contractors]:
        contractors[cid] = {e: Fraction(rng.randint(lo, hi)) for e in edges}
    return Instance.build(source, order, edges, contractors)
