"""Cost-sharing mechanisms and audits on source-rooted weighted DAGs.

A library and CLI for a setting where agent nodes on a directed acyclic
graph must share the cost of connecting everyone to a source, edge costs
are quoted by competing contractors, and both sides can act strategically:
nodes by withholding outgoing edges, contractors by misquoting costs.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from . import errors
from .algos import (
    Arborescence,
    CostView,
    PathResult,
    bfs_depths,
    exact_min_arborescence,
    prim_arborescence,
    shortest_path_from_source,
)
from .audit import (
    AuditConfig,
    AuditReport,
    PropertyVerdict,
    Witness,
    audit_all,
    audit_contractor_truthfulness,
    audit_node_truthfulness,
    check_budget_balance,
    check_ir,
    check_positiveness,
    check_ranking,
    check_symmetry,
)
from .coalition import (
    CoalitionOracle,
    bruteforce_coalition_table,
    coalition_value,
    coalition_value_bruteforce,
    shapley_values,
)
from .fileio import parse_instance, parse_reports, serialize_instance, serialize_reports
from .gen import generate_instance
from .mechanisms import (
    DEFAULT_TIE_SEED,
    MECHANISM_NAMES,
    ContractorSelection,
    Outcome,
    PathDecomposition,
    PathStep,
    contractor_utility,
    decompose_shortest_path,
    depth_order,
    run_bird,
    run_mechanism,
    run_shapley,
    run_shortest_path,
    select_contractor,
)
from .model import (
    ContractorType,
    Cost,
    Dag,
    Edge,
    InducedGraph,
    Instance,
    NodeType,
    ReportProfile,
    induce,
    parents_of,
    validate_instance,
    validate_reports,
)

__version__ = "0.1.0"


def fixture_path(name: str) -> Path:
    """Path of a bundled example instance or overlay file."""
    return Path(str(resources.files("dagshare") / "fixtures" / name))
