"""Core domain types: ground-truth instances, report profiles, induced graphs.

Every cost is an exact rational (``fractions.Fraction``); no floating point
enters the cost arithmetic, so equality and ordering checks are exact.  All
types are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    CycleDetected,
    EdgeIntoSource,
    InvalidReport,
    MalformedInstance,
    TooFewContractors,
    UnknownContractor,
    UnknownNode,
    WeightMapIncomplete,
    WeightNotPositive,
)

Edge = tuple[str, str]
Cost = Fraction


@dataclass(frozen=True)
class Dag:
    """A directed graph rooted at ``source``, intended to be acyclic.

    ``nodes`` holds the agent nodes only; the source is kept separate.  Node
    and edge tuples are stored sorted so that structurally equal graphs
    compare equal and serialize identically.
    """

    source: str
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]

    @staticmethod
    def make(source: str, nodes: Iterable[str], edges: Iterable[Edge]) -> "Dag":
        return Dag(source, tuple(sorted(set(nodes))), tuple(sorted(set(edges))))

    @property
    def all_nodes(self) -> tuple[str, ...]:
        return (self.source,) + self.nodes


@dataclass(frozen=True)
class NodeType:
    """A node's true type: the set of edges leaving it."""

    owner: str
    outgoing: tuple[Edge, ...]


@dataclass(frozen=True)
class ContractorType:
    """A contractor's true type: a full cost quote, one per edge."""

    owner: str
    weights: Mapping[Edge, Fraction]


@dataclass(frozen=True)
class Instance:
    """Ground truth: the graph plus every node's and contractor's true type."""

    dag: Dag
    node_types: Mapping[str, NodeType]
    contractor_types: Mapping[str, ContractorType]

    @staticmethod
    def build(
        source: str,
        agent_nodes: Iterable[str],
        edges: Iterable[Edge],
        contractor_weights: Mapping[str, Mapping[Edge, object]],
    ) -> "Instance":
        """Assemble an instance, deriving node types from the edge list."""
        dag = Dag.make(source, agent_nodes, edges)
        node_types = {
            owner: NodeType(owner, tuple(e for e in dag.edges if e[0] == owner))
            for owner in dag.all_nodes
        }
        contractor_types = {
            cid: ContractorType(cid, {e: Fraction(w) for e, w in sorted(weights.items())})
            for cid, weights in contractor_weights.items()
        }
        return Instance(dag, dict(node_types), dict(contractor_types))

    @property
    def contractors(self) -> tuple[str, ...]:
        return tuple(sorted(self.contractor_types))

    def true_outgoing(self, node: str) -> tuple[Edge, ...]:
        if node not in self.node_types:
            raise UnknownNode(f"no such node: {node!r}")
        return self.node_types[node].outgoing


def _check_acyclic(dag: Dag) -> None:
    indeg = {n: 0 for n in dag.all_nodes}
    out: dict[str, list[str]] = {n: [] for n in dag.all_nodes}
    for u, v in dag.edges:
        indeg[v] += 1
        out[u].append(v)
    queue = deque(n for n, d in indeg.items() if d == 0)
    seen = 0
    while queue:
        u = queue.popleft()
        seen += 1
        for v in out[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if seen != len(indeg):
        cyclic = sorted(n for n, d in indeg.items() if d > 0)
        raise CycleDetected(f"directed cycle through {', '.join(cyclic)}")


def validate_instance(instance: Instance) -> None:
    """Check every structural invariant, raising on the first violation.

    Raises CycleDetected, EdgeIntoSource, WeightNotPositive,
    TooFewContractors, WeightMapIncomplete, UnknownNode or
    MalformedInstance; returns None when the instance is well formed.
    """
    dag = instance.dag
    if dag.source in dag.nodes:
        raise MalformedInstance(f"source {dag.source!r} also appears as an agent node")
    if not dag.nodes:
        raise MalformedInstance("instance has no agent nodes")

    known = set(dag.all_nodes)
    for u, v in dag.edges:
        if u not in known:
            raise UnknownNode(f"edge ({u}, {v}): tail {u!r} is not a declared node")
        if v not in known:
            raise UnknownNode(f"edge ({u}, {v}): head {v!r} is not a declared node")
        if u == v:
            raise CycleDetected(f"self-loop on {u!r}")
        if v == dag.source:
            raise EdgeIntoSource(f"edge ({u}, {v}) enters the source")
    _check_acyclic(dag)

    if set(instance.node_types) != known:
        raise MalformedInstance("node types do not cover exactly the declared nodes")
    declared: set[Edge] = set()
    for owner, ntype in instance.node_types.items():
        for e in ntype.outgoing:
            if e[0] != owner:
                raise MalformedInstance(f"node {owner!r} lists foreign edge ({e[0]}, {e[1]})")
        declared.update(ntype.outgoing)
    if declared != set(dag.edges):
        raise MalformedInstance("union of node types does not equal the edge set")

    if len(instance.contractor_types) < 2:
        # with one quote the runner-up price is undefined
        raise TooFewContractors(
            f"need at least 2 contractors, got {len(instance.contractor_types)}"
        )
    edge_set = frozenset(dag.edges)
    for cid in instance.contractors:
        weights = instance.contractor_types[cid].weights
        missing = sorted(edge_set - weights.keys())
        if missing:
            raise WeightMapIncomplete(f"contractor {cid!r} has no cost for edge {missing[0]}")
        extra = sorted(weights.keys() - edge_set)
        if extra:
            raise WeightMapIncomplete(f"contractor {cid!r} quotes unknown edge {extra[0]}")
        for e in sorted(weights):
            if weights[e] <= 0:
                raise WeightNotPositive(f"contractor {cid!r} quotes {weights[e]} for edge {e}")


@dataclass(frozen=True)
class ReportProfile:
    """What everyone declares: per-node edge subsets, per-contractor costs.

    Contractor reports always cover exactly the union of the reported edges.
    """

    node_reports: Mapping[str, frozenset[Edge]]
    contractor_reports: Mapping[str, Mapping[Edge, Fraction]]

    @staticmethod
    def truthful(instance: Instance) -> "ReportProfile":
        nodes = {n: frozenset(t.outgoing) for n, t in instance.node_types.items()}
        contractors = {
            cid: dict(ct.weights) for cid, ct in instance.contractor_types.items()
        }
        return ReportProfile(nodes, contractors)

    def reported_edges(self) -> frozenset[Edge]:
        out: set[Edge] = set()
        for edges in self.node_reports.values():
            out |= edges
        return frozenset(out)

    def with_node_report(self, node: str, kept: Iterable[Edge]) -> "ReportProfile":
        """Replace one node's report; contractor reports shrink to the new union."""
        node_reports = dict(self.node_reports)
        node_reports[node] = frozenset(kept)
        union: set[Edge] = set()
        for edges in node_reports.values():
            union |= edges
        contractor_reports = {
            cid: {e: w for e, w in report.items() if e in union}
            for cid, report in self.contractor_reports.items()
        }
        return ReportProfile(node_reports, contractor_reports)

    def with_contractor_report(
        self, contractor: str, weights: Mapping[Edge, Fraction]
    ) -> "ReportProfile":
        if contractor not in self.contractor_reports:
            raise UnknownContractor(f"no such contractor: {contractor!r}")
        contractor_reports = dict(self.contractor_reports)
        contractor_reports[contractor] = dict(weights)
        return ReportProfile(self.node_reports, contractor_reports)


def validate_reports(instance: Instance, reports: ReportProfile) -> None:
    """Check a report profile against its instance; raises on the first problem."""
    expected_nodes = set(instance.dag.all_nodes)
    if set(reports.node_reports) != expected_nodes:
        raise InvalidReport("node reports do not cover exactly the instance's nodes")
    for node in sorted(expected_nodes):
        rep = reports.node_reports[node]
        true_out = set(instance.node_types[node].outgoing)
        stray = sorted(rep - true_out)
        if stray:
            raise InvalidReport(f"node {node!r} reports edge {stray[0]} it does not own")
    source = instance.dag.source
    if reports.node_reports[source] != frozenset(instance.node_types[source].outgoing):
        # the source is not strategic: it always offers its full type
        raise InvalidReport("the source must report all of its outgoing edges")

    if set(reports.contractor_reports) != set(instance.contractor_types):
        raise UnknownContractor("contractor reports do not match the instance's contractors")
    union = reports.reported_edges()
    for cid in sorted(reports.contractor_reports):
        rep = reports.contractor_reports[cid]
        if set(rep) != set(union):
            raise InvalidReport(
                f"contractor {cid!r} must quote exactly the reported edges"
            )
        for e in sorted(rep):
            if rep[e] <= 0:
                raise WeightNotPositive(f"contractor {cid!r} reports {rep[e]} for edge {e}")


def _reachable_from(source: str, edges: Iterable[Edge]) -> frozenset[str]:
    out: dict[str, list[str]] = {}
    for u, v in edges:
        out.setdefault(u, []).append(v)
    seen = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in out.get(u, ()):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return frozenset(seen)


@dataclass(frozen=True)
class InducedGraph:
    """The reported edge set weighted by one contractor's quoted costs.

    ``reachable`` caches the nodes with a directed path from the source
    (the source itself included).  Adjacency maps are precomputed and the
    object is never mutated afterwards.
    """

    source: str
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    weights: Mapping[Edge, Fraction]
    reachable: frozenset[str]
    _out: Mapping[str, tuple[tuple[str, Fraction], ...]] = field(
        default=None, repr=False, compare=False
    )
    _in: Mapping[str, tuple[tuple[str, Fraction], ...]] = field(
        default=None, repr=False, compare=False
    )

    def __post_init__(self):
        out: dict[str, list[tuple[str, Fraction]]] = {}
        inc: dict[str, list[tuple[str, Fraction]]] = {}
        for u, v in self.edges:
            w = self.weights[(u, v)]
            out.setdefault(u, []).append((v, w))
            inc.setdefault(v, []).append((u, w))
        object.__setattr__(self, "_out", {k: tuple(v) for k, v in out.items()})
        object.__setattr__(self, "_in", {k: tuple(v) for k, v in inc.items()})

    def out(self, node: str) -> tuple[tuple[str, Fraction], ...]:
        return self._out.get(node, ())

    def parents(self, node: str) -> tuple[tuple[str, Fraction], ...]:
        return self._in.get(node, ())

    def weight(self, edge: Edge) -> Fraction:
        return self.weights[edge]

    @property
    def reachable_agents(self) -> tuple[str, ...]:
        return tuple(n for n in self.nodes if n in self.reachable)


def induce(instance: Instance, reports: ReportProfile, contractor: str) -> InducedGraph:
    """The graph of reported edges under one contractor's reported costs."""
    if contractor not in instance.contractor_types:
        raise UnknownContractor(f"no such contractor: {contractor!r}")
    edges = tuple(sorted(reports.reported_edges()))
    weights = dict(reports.contractor_reports[contractor])
    reachable = _reachable_from(instance.dag.source, edges)
    return InducedGraph(instance.dag.source, instance.dag.nodes, edges, weights, reachable)


def parents_of(graph: InducedGraph, node: str) -> frozenset[str]:
    """All nodes with an edge into ``node`` in the induced graph."""
    if node != graph.source and node not in graph.nodes:
        raise UnknownNode(f"no such node: {node!r}")
    return frozenset(u for u, _ in graph.parents(node))
