"""Contractor selection and the three cost-sharing mechanisms.

All three mechanisms share the selection rule: every contractor's induced
graph is priced by its greedy arborescence, the cheapest quote wins, and the
winner is paid the second-cheapest quote (a second-price auction over
spanning trees).  They differ only in how the collected payment is split
among the connected agent nodes:

* shapley: proportional to each node's Shapley value of the connection game
  on the winner's graph;
* bird: proportional to the weight of each node's entering edge on the
  winner's greedy arborescence;
* shortest-path: nodes are processed deepest first, each is charged the
  residual cost of its cheapest path after earlier paths' edges were zeroed,
  and shares are proportional to those residuals.

Each evaluation is a pure computation over immutable inputs; the edge
zeroing of the shortest-path split happens on a private overlay.  Report
profiles are expected to be valid (``validate_reports``).
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .algos import (
    CostView,
    bfs_depths,
    exact_min_arborescence,
    prim_arborescence,
    shortest_path_from_source,
)
from .coalition import DEFAULT_SHAPLEY_LIMIT, CoalitionOracle
from .errors import TooFewContractors, UnknownContractor
from .model import Edge, InducedGraph, Instance, ReportProfile, induce

ZERO = Fraction(0)

# Reproduces the documented deepest-first processing order of the bundled
# seven-node example (G, D, F, E, C, B, A); see tests/test_mechanisms.py.
DEFAULT_TIE_SEED = 161

MECHANISM_NAMES = ("shapley", "bird", "shortest-path")


@dataclass(frozen=True)
class ContractorSelection:
    """Winner, runner-up and every contractor's greedy tree cost."""

    winner: str
    runner_up: str
    winner_cost: Fraction
    runner_up_cost: Fraction
    all_costs: Mapping[str, Fraction]


@dataclass(frozen=True)
class Outcome:
    """A mechanism's full result.

    ``payments`` are non-positive (the mechanism pays); only the winner's is
    nonzero.  ``shares`` covers exactly the reachable agent nodes and sums
    to the winner's payment, exactly.
    """

    mechanism: str
    selection: ContractorSelection
    payments: Mapping[str, Fraction]
    selected_edges: frozenset[Edge]
    shares: Mapping[str, Fraction]
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class PathStep:
    """One node's turn in the shortest-path split."""

    node: str
    cost: Fraction
    path_edges: tuple[Edge, ...]
    path_nodes: tuple[str, ...]
    covered_before: frozenset[str]
    newly_zeroed: tuple[Edge, ...]


@dataclass(frozen=True)
class PathDecomposition:
    """The full deepest-first path decomposition of one induced graph.

    ``total`` is the sum of the per-node residual costs, which equals the
    summed weight of ``selected_edges`` because every selected edge is
    zeroed exactly once.
    """

    order: tuple[str, ...]
    steps: tuple[PathStep, ...]
    selected_edges: frozenset[Edge]
    total: Fraction

    def residuals(self) -> dict[str, Fraction]:
        return {step.node: step.cost for step in self.steps}


def _selection(instance: Instance, reports: ReportProfile):
    contractors = instance.contractors
    if len(contractors) < 2:
        raise TooFewContractors(f"need at least 2 contractors, got {len(contractors)}")
    graphs = {cid: induce(instance, reports, cid) for cid in contractors}
    trees = {cid: prim_arborescence(graphs[cid]) for cid in contractors}
    costs = {cid: trees[cid].total_cost for cid in contractors}
    winner = min(contractors, key=lambda c: (costs[c], c))
    runner_up = min(
        (c for c in contractors if c != winner), key=lambda c: (costs[c], c)
    )
    selection = ContractorSelection(
        winner, runner_up, costs[winner], costs[runner_up], dict(costs)
    )
    return selection, graphs, trees


def select_contractor(instance: Instance, reports: ReportProfile) -> ContractorSelection:
    """Price every contractor's graph and pick winner and runner-up.

    Ties go to the smaller contractor id, for the winner and the runner-up
    alike; the runner-up is chosen among all contractors other than the
    winner by identity.
    """
    selection, _, _ = _selection(instance, reports)
    return selection


def _payments(instance: Instance, selection: ContractorSelection) -> dict[str, Fraction]:
    payments = {cid: ZERO for cid in instance.contractors}
    payments[selection.winner] = -selection.runner_up_cost
    return payments


def _tree_notes(graph: InducedGraph, selection: ContractorSelection) -> list[str]:
    exact = exact_min_arborescence(graph)
    if exact.total_cost != selection.winner_cost:
        return [
            "greedy arborescence is not minimal on the winner's graph: "
            f"greedy {selection.winner_cost}, minimum {exact.total_cost}"
        ]
    return []


def contractor_utility(
    instance: Instance, reports: ReportProfile, outcome: Outcome, contractor: str
) -> Fraction:
    """Payment received minus the true cost of building the selected edges.

    Non-winners have utility 0.  True costs come from the instance, not
    from the (possibly misreported) profile.
    """
    if contractor not in instance.contractor_types:
        raise UnknownContractor(f"no such contractor: {contractor!r}")
    if contractor != outcome.selection.winner:
        return ZERO
    true_weights = instance.contractor_types[contractor].weights
    build_cost = sum((true_weights[e] for e in outcome.selected_edges), ZERO)
    return -outcome.payments[contractor] - build_cost


def run_shapley(
    instance: Instance, reports: ReportProfile, *, limit: int = DEFAULT_SHAPLEY_LIMIT
) -> Outcome:
    """Second-price selection with Shapley-proportional shares.

    x_i = phi_i / (sum of phi) * runner-up cost, computed on the winner's
    induced graph.  Using the Shapley sum as denominator makes budget
    balance hold by construction; a note is attached when that sum differs
    from the winner's greedy tree cost (possible on directed graphs).
    """
    selection, graphs, trees = _selection(instance, reports)
    graph = graphs[selection.winner]
    oracle = CoalitionOracle(graph)
    phi = oracle.shapley(limit=limit)
    total_phi = sum(phi.values(), ZERO)
    pay = selection.runner_up_cost
    shares = {
        node: (value / total_phi) * pay if total_phi else ZERO
        for node, value in phi.items()
    }
    notes = _tree_notes(graph, selection)
    if total_phi != selection.winner_cost:
        notes.append(
            f"shapley denominator {total_phi} differs from the winner's greedy "
            f"tree cost {selection.winner_cost}"
        )
    return Outcome(
        "shapley",
        selection,
        _payments(instance, selection),
        trees[selection.winner].edges,
        shares,
        tuple(notes),
    )


def run_bird(instance: Instance, reports: ReportProfile) -> Outcome:
    """Second-price selection with entering-edge-proportional shares.

    x_i = k_i / winner cost * runner-up cost, where k_i is the weight of
    i's entering edge on the winner's greedy arborescence.
    """
    selection, graphs, trees = _selection(instance, reports)
    tree = trees[selection.winner]
    pay = selection.runner_up_cost
    shares = {
        node: (k / selection.winner_cost) * pay if selection.winner_cost else ZERO
        for node, k in tree.entering_cost.items()
    }
    notes = _tree_notes(graphs[selection.winner], selection)
    return Outcome(
        "bird",
        selection,
        _payments(instance, selection),
        tree.edges,
        shares,
        tuple(notes),
    )


def depth_order(graph: InducedGraph, tie_seed: int = DEFAULT_TIE_SEED) -> tuple[str, ...]:
    """Reachable agent nodes ordered deepest first.

    Nodes of equal depth are permuted by a deterministic shuffle drawn from
    ``tie_seed``; one generator is threaded through the groups in
    descending-depth order, so the full order is a pure function of the
    graph and the seed.
    """
    depths = bfs_depths(graph)
    groups: dict[int, list[str]] = defaultdict(list)
    for node in graph.reachable_agents:
        groups[depths[node]].append(node)
    rng = random.Random(tie_seed)
    order: list[str] = []
    for depth in sorted(groups, reverse=True):
        members = sorted(groups[depth])
        rng.shuffle(members)
        order.extend(members)
    return tuple(order)


def decompose_shortest_path(
    graph: InducedGraph, *, tie_seed: int = DEFAULT_TIE_SEED
) -> PathDecomposition:
    """Charge every reachable agent its residual shortest-path cost.

    Deepest nodes first: each node's cheapest path from the source is
    priced under the current weights, then its edges are zeroed so later
    (shallower) nodes ride for free over already-paid segments.  The covered
    set starts as {source} and grows by each path's nodes.
    """
    order = depth_order(graph, tie_seed)
    costs = CostView(graph)
    covered: set[str] = {graph.source}
    steps: list[PathStep] = []
    selected: set[Edge] = set()
    total = ZERO
    for node in order:
        before = frozenset(covered)
        path = shortest_path_from_source(costs, graph, node)
        fresh = tuple(e for e in path.edges if not costs.is_zeroed(e))
        for e in path.edges:
            costs.zero(e)
        selected.update(path.edges)
        covered.update(path.nodes)
        total += path.cost
        steps.append(PathStep(node, path.cost, path.edges, path.nodes, before, fresh))
    return PathDecomposition(order, tuple(steps), frozenset(selected), total)


def run_shortest_path(
    instance: Instance, reports: ReportProfile, *, tie_seed: int = DEFAULT_TIE_SEED
) -> Outcome:
    """Second-price selection with residual-path-proportional shares.

    x_i = d_i / B * runner-up cost, where d_i is node i's residual path
    cost and B their sum; the selected edges are the union of the charged
    paths, which forms a spanning arborescence of the reachable set under
    strictly positive weights.
    """
    selection, graphs, _ = _selection(instance, reports)
    graph = graphs[selection.winner]
    decomposition = decompose_shortest_path(graph, tie_seed=tie_seed)
    pay = selection.runner_up_cost
    shares = {
        step.node: (step.cost / decomposition.total) * pay if decomposition.total else ZERO
        for step in decomposition.steps
    }
    return Outcome(
        "shortest-path",
        selection,
        _payments(instance, selection),
        decomposition.selected_edges,
        shares,
        tuple(_tree_notes(graph, selection)),
    )


def run_mechanism(
    name: str,
    instance: Instance,
    reports: ReportProfile,
    *,
    tie_seed: int = DEFAULT_TIE_SEED,
    shapley_limit: int = DEFAULT_SHAPLEY_LIMIT,
) -> Outcome:
    """Dispatch by mechanism name ('shapley', 'bird' or 'shortest-path')."""
    if name == "shapley":
        return run_shapley(instance, reports, limit=shapley_limit)
    if name == "bird":
        return run_bird(instance, reports)
    if name == "shortest-path":
        return run_shortest_path(instance, reports, tie_seed=tie_seed)
    raise ValueError(f"unknown mechanism {name!r}; expected one of {MECHANISM_NAMES}")
