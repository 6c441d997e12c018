"""Executable property checks and brute-force strategic-deviation search.

The five per-profile checks (budget balance, positiveness, individual
rationality, ranking, symmetry) are exact rational tests on a single
outcome.  The two truthfulness audits enumerate a finite deviation space
around the truthful profile: every proper subset of each node's outgoing
edges, and a multiplicative grid of contractor misquotes.  A passing
truthfulness verdict therefore means "no violation found within budget",
not a proof; a failing verdict carries a witness profile that replays to
the same numbers bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .errors import BudgetExceeded
from .mechanisms import (
    DEFAULT_SHAPLEY_LIMIT,
    DEFAULT_TIE_SEED,
    Outcome,
    contractor_utility,
    run_mechanism,
)
from .model import Instance, ReportProfile, induce, parents_of

ZERO = Fraction(0)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

DEFAULT_GRID = (Fraction(1, 2), Fraction(9, 10), Fraction(11, 10), Fraction(2))


@dataclass(frozen=True)
class AuditConfig:
    """Knobs for the deviation search; defaults audit exhaustively."""

    tie_seed: int = DEFAULT_TIE_SEED
    shapley_limit: int = DEFAULT_SHAPLEY_LIMIT
    node_budget: int | None = None
    grid: tuple[Fraction, ...] = DEFAULT_GRID


@dataclass(frozen=True)
class Witness:
    """A concrete violation: who deviated, to what, and the before/after values."""

    party: str
    description: str
    reports: ReportProfile | None
    before: Fraction | None
    after: Fraction | None


@dataclass(frozen=True)
class PropertyVerdict:
    prop: str
    status: str
    detail: str
    witness: Witness | None = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL


@dataclass(frozen=True)
class AuditReport:
    mechanism: str
    verdicts: tuple[PropertyVerdict, ...]

    @property
    def failures(self) -> tuple[PropertyVerdict, ...]:
        return tuple(v for v in self.verdicts if v.failed)

    @property
    def all_passed(self) -> bool:
        return not self.failures

    def to_text(self) -> str:
        lines = [f"audit of mechanism: {self.mechanism}"]
        for v in self.verdicts:
            lines.append(f"  [{v.status.upper():>7}] {v.prop}: {v.detail}")
            if v.witness is not None:
                lines.append(f"            witness: {v.witness.description}")
                if v.witness.before is not None:
                    lines.append(
                        f"            before: {v.witness.before}  after: {v.witness.after}"
                    )
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "all_passed": self.all_passed,
            "verdicts": [
                {
                    "property": v.prop,
                    "status": v.status,
                    "detail": v.detail,
                    "witness": None if v.witness is None else v.witness.description,
                }
                for v in self.verdicts
            ],
        }


def check_budget_balance(outcome: Outcome) -> PropertyVerdict:
    """Collected shares must equal the amount paid out, exactly."""
    collected = sum(outcome.shares.values(), ZERO)
    paid = sum((-p for p in outcome.payments.values() if p < 0), ZERO)
    if collected == paid:
        return PropertyVerdict("budget-balance", PASS, f"shares sum to {collected}")
    return PropertyVerdict(
        "budget-balance",
        FAIL,
        f"shares sum to {collected} but {paid} was paid out",
        Witness("mechanism", f"sum of shares {collected} != payment {paid}", None, paid, collected),
    )


def check_positiveness(outcome: Outcome) -> PropertyVerdict:
    """No agent node may receive a negative share."""
    for node in sorted(outcome.shares):
        if outcome.shares[node] < 0:
            return PropertyVerdict(
                "positiveness",
                FAIL,
                f"node {node!r} has negative share {outcome.shares[node]}",
                Witness(node, f"share of {node} is {outcome.shares[node]}", None, ZERO,
                        outcome.shares[node]),
            )
    return PropertyVerdict("positiveness", PASS, f"all {len(outcome.shares)} shares are >= 0")


def check_ir(instance: Instance, reports: ReportProfile, outcome: Outcome) -> PropertyVerdict:
    """Every contractor's utility (true costs) must be non-negative."""
    for cid in instance.contractors:
        utility = contractor_utility(instance, reports, outcome, cid)
        if utility < 0:
            return PropertyVerdict(
                "individual-rationality",
                FAIL,
                f"contractor {cid!r} has utility {utility}",
                Witness(cid, f"utility of {cid} is {utility}", reports, ZERO, utility),
            )
    return PropertyVerdict(
        "individual-rationality", PASS, "every contractor's utility is >= 0"
    )


def _comparable_pairs(instance: Instance, reports: ReportProfile, outcome: Outcome):
    """Pairs of charged nodes with identical parent sets (each other excluded).

    Pairs whose shared parent set is empty are skipped: with nothing to
    compare, both the strict-ranking and the symmetry premise would hold
    vacuously and contradict each other.
    """
    graph = induce(instance, reports, outcome.selection.winner)
    nodes = sorted(n for n in graph.reachable_agents if n in outcome.shares)
    for i, j in combinations(nodes, 2):
        shared_i = parents_of(graph, i) - {j}
        shared_j = parents_of(graph, j) - {i}
        if shared_i != shared_j or not shared_i:
            continue
        yield graph, i, j, sorted(shared_i)


def check_ranking(
    instance: Instance, reports: ReportProfile, outcome: Outcome
) -> PropertyVerdict:
    """Strictly cheaper entering edges (from every shared parent, under the
    winner's reported costs) must mean a strictly smaller share."""
    checked = 0
    for graph, i, j, parents in _comparable_pairs(instance, reports, outcome):
        lo, hi = None, None
        if all(graph.weight((k, i)) < graph.weight((k, j)) for k in parents):
            lo, hi = i, j
        elif all(graph.weight((k, j)) < graph.weight((k, i)) for k in parents):
            lo, hi = j, i
        if lo is None:
            continue
        checked += 1
        if not outcome.shares[lo] < outcome.shares[hi]:
            return PropertyVerdict(
                "ranking",
                FAIL,
                f"{lo!r} has cheaper entering edges than {hi!r} but does not pay less",
                Witness(
                    lo,
                    f"shares: {lo}={outcome.shares[lo]}, {hi}={outcome.shares[hi]}",
                    reports,
                    outcome.shares[lo],
                    outcome.shares[hi],
                ),
            )
    detail = f"{checked} strictly ordered pair(s) checked" if checked else "vacuous: no qualifying pair"
    return PropertyVerdict("ranking", PASS, detail)


def check_symmetry(
    instance: Instance, reports: ReportProfile, outcome: Outcome
) -> PropertyVerdict:
    """Equal entering edges from every shared parent must mean equal shares."""
    checked = 0
    for graph, i, j, parents in _comparable_pairs(instance, reports, outcome):
        if not all(graph.weight((k, i)) == graph.weight((k, j)) for k in parents):
            continue
        checked += 1
        if outcome.shares[i] != outcome.shares[j]:
            return PropertyVerdict(
                "symmetry",
                FAIL,
                f"{i!r} and {j!r} play the same role but pay differently",
                Witness(
                    i,
                    f"shares: {i}={outcome.shares[i]}, {j}={outcome.shares[j]}",
                    reports,
                    outcome.shares[i],
                    outcome.shares[j],
                ),
            )
    detail = f"{checked} symmetric pair(s) checked" if checked else "vacuous: no qualifying pair"
    return PropertyVerdict("symmetry", PASS, detail)


def _run(mechanism: str, instance: Instance, reports: ReportProfile, config: AuditConfig):
    return run_mechanism(
        mechanism,
        instance,
        reports,
        tie_seed=config.tie_seed,
        shapley_limit=config.shapley_limit,
    )


def audit_node_truthfulness(
    instance: Instance, mechanism: str, config: AuditConfig = AuditConfig()
) -> PropertyVerdict:
    """Can any node lower its own share by withholding outgoing edges?

    Each agent node deviates unilaterally (everyone else truthful) to every
    proper subset of its true outgoing edges.  ``config.node_budget`` caps
    the number of mechanism evaluations: 0 skips the audit, and a space
    larger than a positive budget raises BudgetExceeded.  A node that its
    own deviation leaves unreachable would exit the sharing population, so
    that comparison is recorded as skipped rather than judged (on a DAG a
    node can never disconnect itself, so this is purely defensive).
    """
    prop = "node-truthfulness"
    if config.node_budget == 0:
        return PropertyVerdict(prop, SKIPPED, "deviation budget is 0; nothing audited")

    truthful = ReportProfile.truthful(instance)
    space = sum(
        2 ** len(instance.node_types[n].outgoing) - 1 for n in instance.dag.nodes
    )
    if config.node_budget is not None and space > config.node_budget:
        raise BudgetExceeded(
            f"node deviation space {space} exceeds budget {config.node_budget}"
        )
    base = _run(mechanism, instance, truthful, config)

    evaluated = 0
    self_disconnected = 0
    for node in instance.dag.nodes:
        outgoing = sorted(instance.node_types[node].outgoing)
        if not outgoing or node not in base.shares:
            continue
        truthful_share = base.shares[node]
        for cut_size in range(1, len(outgoing) + 1):
            for cut in combinations(outgoing, cut_size):
                kept = [e for e in outgoing if e not in set(cut)]
                deviated = truthful.with_node_report(node, kept)
                outcome = _run(mechanism, instance, deviated, config)
                evaluated += 1
                if node not in outcome.shares:
                    self_disconnected += 1
                    continue
                if outcome.shares[node] < truthful_share:
                    cut_text = " ".join(f"({u},{v})" for u, v in cut)
                    return PropertyVerdict(
                        prop,
                        FAIL,
                        f"node {node!r} profits by withholding {cut_text}",
                        Witness(
                            node,
                            f"{node} cuts {cut_text}: share {truthful_share} -> "
                            f"{outcome.shares[node]}",
                            deviated,
                            truthful_share,
                            outcome.shares[node],
                        ),
                    )
    detail = f"no violation found within budget ({evaluated} deviations)"
    if self_disconnected:
        detail += f"; {self_disconnected} self-disconnecting deviation(s) skipped"
    return PropertyVerdict(prop, PASS, detail)


def audit_contractor_truthfulness(
    instance: Instance, mechanism: str, config: AuditConfig = AuditConfig()
) -> PropertyVerdict:
    """Can any contractor raise its utility by misquoting costs?

    Bounded search: every single edge and the whole quote vector are scaled
    by each grid factor, one contractor at a time, nodes truthful.
    Utilities always use true costs.
    """
    prop = "contractor-truthfulness"
    truthful = ReportProfile.truthful(instance)
    base = _run(mechanism, instance, truthful, config)

    evaluated = 0
    for cid in instance.contractors:
        true_weights = instance.contractor_types[cid].weights
        baseline = contractor_utility(instance, truthful, base, cid)
        candidates: list[tuple[str, dict]] = []
        for edge in sorted(true_weights):
            for factor in config.grid:
                scaled = dict(true_weights)
                scaled[edge] = scaled[edge] * factor
                candidates.append((f"scales ({edge[0]},{edge[1]}) by {factor}", scaled))
        for factor in config.grid:
            scaled = {e: w * factor for e, w in true_weights.items()}
            candidates.append((f"scales all edges by {factor}", scaled))
        for description, quote in candidates:
            deviated = truthful.with_contractor_report(cid, quote)
            outcome = _run(mechanism, instance, deviated, config)
            evaluated += 1
            utility = contractor_utility(instance, deviated, outcome, cid)
            if utility > baseline:
                return PropertyVerdict(
                    prop,
                    FAIL,
                    f"contractor {cid!r} profits when it {description}",
                    Witness(
                        cid,
                        f"{cid} {description}: utility {baseline} -> {utility}",
                        deviated,
                        baseline,
                        utility,
                    ),
                )
    return PropertyVerdict(
        prop, PASS, f"no profitable misreport on the grid ({evaluated} deviations)"
    )


def audit_all(
    instance: Instance, mechanism: str, config: AuditConfig = AuditConfig()
) -> AuditReport:
    """All five exact checks at the truthful profile plus both deviation audits."""
    truthful = ReportProfile.truthful(instance)
    outcome = _run(mechanism, instance, truthful, config)
    verdicts = (
        check_budget_balance(outcome),
        check_positiveness(outcome),
        check_ir(instance, truthful, outcome),
        check_ranking(instance, truthful, outcome),
        check_symmetry(instance, truthful, outcome),
        audit_node_truthfulness(instance, mechanism, config),
        audit_contractor_truthfulness(instance, mechanism, config),
    )
    return AuditReport(mechanism, verdicts)
