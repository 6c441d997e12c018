from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

import dagshare as ds
from dagshare.errors import InvalidReport, ParseError, UnknownContractor, WeightNotPositive

from conftest import instances


def test_fig5_parses_to_documented_instance(fig5):
    assert fig5.dag.source == "s"
    assert fig5.dag.nodes == ("A", "B", "C", "D", "E", "F", "G")
    assert ("C", "G") in fig5.dag.edges
    assert fig5.contractor_types["a"].weights[("C", "G")] == 12
    assert fig5.contractor_types["b"].weights[("C", "D")] == 11
    assert fig5.contractors == ("a", "b")


def test_parse_rational_forms():
    text = "\n".join(
        [
            "dagshare v1",
            "source s",
            "node A",
            "edge s A",
            "contractor a",
            "cost s A 5/2",
            "contractor b",
            "cost s A 7",
        ]
    )
    inst = ds.parse_instance(text)
    assert inst.contractor_types["a"].weights[("s", "A")] == Fraction(5, 2)
    assert inst.contractor_types["b"].weights[("s", "A")] == Fraction(7)


def test_single_node_no_edges_parses():
    text = "dagshare v1\nsource s\nnode A\ncontractor a\ncontractor b\n"
    inst = ds.parse_instance(text)
    assert inst.dag.nodes == ("A",)
    assert inst.dag.edges == ()


@pytest.mark.parametrize(
    "text, line",
    [
        ("nonsense v9\nsource s\n", 1),
        ("dagshare v1\nsource s\nsource t\n", 3),
        ("dagshare v1\nsource s\nnode A\nnode A\n", 4),
        ("dagshare v1\nsource s\nnode A\nedge s A\nedge s A\n", 5),
        ("dagshare v1\nsource s\nnode A\nedge s\n", 4),
        ("dagshare v1\nsource s\nnode A\ncost s A 3\n", 4),
        ("dagshare v1\nsource s\nnode A\nedge s A\ncontractor a\ncost s A 3/0\n", 6),
        ("dagshare v1\nsource s\nnode A\nedge s A\ncontractor a\ncost s A x\n", 6),
        ("dagshare v1\nsource s\nwhatever A\n", 3),
        ("dagshare v1\nnode A\n", 3),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        ds.parse_instance(text)
    assert err.value.line == line


def test_comments_and_blank_lines_ignored():
    text = (
        "# leading comment\n\ndagshare v1\n"
        "source s  # trailing\nnode A\nedge s A\n"
        "contractor a\ncost s A 1\ncontractor b\ncost s A 2\n"
    )
    inst = ds.parse_instance(text)
    ds.validate_instance(inst)


def test_roundtrip_fig_fixtures(fig1, fig2, fig3, fig4, fig5):
    for inst in (fig1, fig2, fig3, fig4, fig5):
        text = ds.serialize_instance(inst)
        assert ds.parse_instance(text) == inst
        # canonical form is a fixed point of serialization
        assert ds.serialize_instance(ds.parse_instance(text)) == text


@settings(max_examples=60, deadline=None)
@given(instances())
def test_roundtrip_random_instances(inst):
    assert ds.parse_instance(ds.serialize_instance(inst)) == inst


def test_overlay_cut_and_requote(fig1):
    text = "cut A A B\nreport b s A 300\n"
    profile = ds.parse_reports(text, fig1)
    assert ("A", "B") not in profile.reported_edges()
    assert profile.contractor_reports["b"][("s", "A")] == 300
    assert profile.contractor_reports["a"][("s", "A")] == 3


def test_overlay_semantic_errors(fig1):
    with pytest.raises(InvalidReport):
        ds.parse_reports("cut B A B\n", fig1)  # edge not owned by B
    with pytest.raises(InvalidReport):
        ds.parse_reports("cut A A Z\n", fig1)  # unknown edge
    with pytest.raises(UnknownContractor):
        ds.parse_reports("report z s A 3\n", fig1)
    with pytest.raises(WeightNotPositive):
        ds.parse_reports("report a s A 0\n", fig1)
    with pytest.raises(InvalidReport):
        ds.parse_reports("cut A A B\nreport a A B 4\n", fig1)  # re-quote of a cut edge
    with pytest.raises(ParseError):
        ds.parse_reports("cut A A\n", fig1)


def test_overlay_roundtrip(fig1):
    profile = ds.parse_reports("cut A A B\nreport b s A 300\n", fig1)
    text = ds.serialize_reports(fig1, profile)
    again = ds.parse_reports(text, fig1)
    assert again == profile


def test_overlay_roundtrip_truthful_is_empty(fig5):
    truthful = ds.ReportProfile.truthful(fig5)
    assert ds.serialize_reports(fig5, truthful) == ""
