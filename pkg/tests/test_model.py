from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

import dagshare as ds
from dagshare.errors import (
    CycleDetected,
    EdgeIntoSource,
    InvalidReport,
    TooFewContractors,
    UnknownContractor,
    UnknownNode,
    WeightMapIncomplete,
    WeightNotPositive,
)

from conftest import instances
from helpers import reachable_by_search


def make(edges, weights_by_contractor, nodes=None):
    if nodes is None:
        nodes = sorted({n for e in edges for n in e} - {"s"})
    return ds.Instance.build("s", nodes, edges, weights_by_contractor)


def test_minimal_instance_validates():
    inst = make([("s", "A")], {"a": {("s", "A"): 3}, "b": {("s", "A"): 4}})
    ds.validate_instance(inst)


def test_cycle_rejected():
    edges = [("s", "A"), ("A", "B"), ("B", "A")]
    weights = {c: {e: 1 for e in edges} for c in "ab"}
    with pytest.raises(CycleDetected):
        ds.validate_instance(make(edges, weights))


def test_self_loop_rejected():
    edges = [("s", "A"), ("A", "A")]
    weights = {c: {e: 1 for e in edges} for c in "ab"}
    with pytest.raises(CycleDetected):
        ds.validate_instance(make(edges, weights))


def test_edge_into_source_rejected():
    edges = [("s", "A"), ("A", "s")]
    weights = {c: {e: 1 for e in edges} for c in "ab"}
    with pytest.raises(EdgeIntoSource):
        ds.validate_instance(make(edges, weights))


def test_single_contractor_rejected():
    # the runner-up price is an argmin over the other contractors, so it is
    # undefined with fewer than two of them
    inst = make([("s", "A")], {"a": {("s", "A"): 3}})
    with pytest.raises(TooFewContractors):
        ds.validate_instance(inst)


def test_nonpositive_weight_rejected():
    inst = make([("s", "A")], {"a": {("s", "A"): 0}, "b": {("s", "A"): 4}})
    with pytest.raises(WeightNotPositive):
        ds.validate_instance(inst)


def test_incomplete_weight_map_rejected():
    edges = [("s", "A"), ("A", "B")]
    inst = make(edges, {"a": {("s", "A"): 3}, "b": {e: 1 for e in edges}})
    with pytest.raises(WeightMapIncomplete):
        ds.validate_instance(inst)


def test_unknown_endpoint_rejected():
    inst = ds.Instance.build(
        "s", ["A"], [("s", "A"), ("A", "Z")],
        {"a": {("s", "A"): 1, ("A", "Z"): 1}, "b": {("s", "A"): 1, ("A", "Z"): 1}},
    )
    with pytest.raises(UnknownNode):
        ds.validate_instance(inst)


def test_truthful_induce_is_identity(fig5):
    reports = ds.ReportProfile.truthful(fig5)
    g = ds.induce(fig5, reports, "a")
    assert g.edges == fig5.dag.edges
    assert dict(g.weights) == dict(fig5.contractor_types["a"].weights)
    assert g.reachable == reachable_by_search("s", fig5.dag.edges)


def test_induce_cut_disconnects_downstream(fig1):
    # withholding (A, B) severs the only route to B
    reports = ds.ReportProfile.truthful(fig1).with_node_report("A", [("A", "C")])
    g = ds.induce(fig1, reports, "a")
    assert "B" not in g.reachable
    assert {"s", "A", "C"} <= set(g.reachable)
    assert set(g.edges) == reports.reported_edges()


def test_induce_cut_off_path_edge_keeps_reachable_set():
    # Q is unreachable, so dropping its edge cannot change reachability
    edges = [("s", "P"), ("Q", "P")]
    weights = {c: {e: 1 for e in edges} for c in "ab"}
    inst = make(edges, weights, nodes=["P", "Q"])
    truthful = ds.ReportProfile.truthful(inst)
    cut = truthful.with_node_report("Q", [])
    before = ds.induce(inst, truthful, "a").reachable
    after = ds.induce(inst, cut, "a").reachable
    assert before == after == reachable_by_search("s", [("s", "P")])


def test_induce_unknown_contractor(fig1):
    with pytest.raises(UnknownContractor):
        ds.induce(fig1, ds.ReportProfile.truthful(fig1), "nobody")


def test_induced_edge_set_is_contractor_independent(fig5):
    reports = ds.ReportProfile.truthful(fig5).with_node_report("C", [("C", "D")])
    views = [ds.induce(fig5, reports, cid) for cid in fig5.contractors]
    assert all(v.edges == views[0].edges for v in views)
    assert set(views[0].edges) == reports.reported_edges()


def test_parents_of(fig5):
    g = ds.induce(fig5, ds.ReportProfile.truthful(fig5), "a")
    assert "C" in ds.parents_of(g, "G")
    assert ds.parents_of(g, "s") == frozenset()
    with pytest.raises(UnknownNode):
        ds.parents_of(g, "nope")


def test_parents_of_isolated_node():
    edges = [("s", "P"), ("Q", "P")]
    weights = {c: {e: 1 for e in edges} for c in "ab"}
    inst = make(edges, weights, nodes=["P", "Q"])
    g = ds.induce(inst, ds.ReportProfile.truthful(inst), "a")
    assert ds.parents_of(g, "Q") == frozenset()


def test_validate_reports_catches_foreign_edge(fig1):
    truthful = ds.ReportProfile.truthful(fig1)
    bad = ds.ReportProfile(
        dict(truthful.node_reports) | {"C": frozenset({("A", "B")})},
        truthful.contractor_reports,
    )
    with pytest.raises(InvalidReport):
        ds.validate_reports(fig1, bad)


def test_validate_reports_source_must_be_truthful(fig5):
    truthful = ds.ReportProfile.truthful(fig5)
    bad = truthful.with_node_report("s", [("s", "A")])
    with pytest.raises(InvalidReport):
        ds.validate_reports(fig5, bad)


def test_validate_reports_cost_domain_must_match(fig1):
    truthful = ds.ReportProfile.truthful(fig1)
    cut = truthful.with_node_report("A", [("A", "C")])
    stale = ds.ReportProfile(cut.node_reports, truthful.contractor_reports)
    with pytest.raises(InvalidReport):
        ds.validate_reports(fig1, stale)


def test_with_node_report_shrinks_contractor_domains(fig1):
    cut = ds.ReportProfile.truthful(fig1).with_node_report("A", [("A", "C")])
    for cid in fig1.contractors:
        assert set(cut.contractor_reports[cid]) == cut.reported_edges()
    ds.validate_reports(fig1, cut)


@settings(max_examples=60, deadline=None)
@given(instances())
def test_reachability_monotone_under_more_edges(inst):
    truthful = ds.ReportProfile.truthful(inst)
    full = ds.induce(inst, truthful, inst.contractors[0]).reachable
    node = inst.dag.nodes[0]
    cut = truthful.with_node_report(node, [])
    smaller = ds.induce(inst, cut, inst.contractors[0]).reachable
    assert smaller <= full


@settings(max_examples=40, deadline=None)
@given(instances())
def test_generated_instances_have_exact_rational_weights(inst):
    for ct in inst.contractor_types.values():
        assert all(isinstance(w, Fraction) for w in ct.weights.values())
