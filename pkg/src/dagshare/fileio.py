"""Line-oriented text formats for instances and report-profile overlays.

Instance files (UTF-8)::

    dagshare v1
    source s
    node A
    node B
    edge s A
    edge A B
    contractor a
    cost s A 3
    cost A B 5/2
    contractor b
    cost s A 4
    cost A B 3

Report overlays start from the truthful profile and patch it::

    cut A A B          # node A withholds its edge (A, B)
    report b s A 7/2   # contractor b re-quotes edge (s, A)

Rationals are written ``numerator`` or ``numerator/denominator`` with a
positive denominator.  ``#`` starts a comment; blank lines are ignored.
Syntax problems raise ParseError with a line and column; semantic problems
(unknown nodes, missing costs, non-positive weights) are left to
``validate_instance`` / ``validate_reports``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import InvalidReport, ParseError, UnknownContractor, WeightNotPositive
from .model import Edge, Instance, ReportProfile, validate_reports

HEADER = "dagshare v1"

_RATIONAL = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def _tokenize(text: str):
    """Yield (lineno, [(token, column), ...]) for non-blank lines, comments stripped."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]
        if tokens:
            yield lineno, tokens


def _parse_rational(token: str, lineno: int, column: int) -> Fraction:
    m = _RATIONAL.match(token)
    if not m:
        raise ParseError(f"expected a rational number, got {token!r}", lineno, column)
    num = int(m.group(1))
    if m.group(2) is None:
        return Fraction(num)
    den = int(m.group(2))
    if den == 0:
        raise ParseError("denominator must be positive", lineno, column)
    return Fraction(num, den)


def _require(tokens, count: int, lineno: int, usage: str):
    if len(tokens) != count:
        col = tokens[-1][1] if len(tokens) > count else tokens[0][1]
        raise ParseError(f"expected '{usage}'", lineno, col)


def parse_instance(text: str) -> Instance:
    """Parse an instance file.  The result is not validated; run
    ``validate_instance`` to enforce the structural invariants."""
    lines = list(_tokenize(text))
    if not lines:
        raise ParseError(f"missing header line '{HEADER}'", 1)
    header_line, header_tokens = lines[0]
    if [t for t, _ in header_tokens] != HEADER.split():
        raise ParseError(f"first line must be '{HEADER}'", header_line, header_tokens[0][1])

    source: str | None = None
    nodes: list[str] = []
    edges: list[Edge] = []
    weights: dict[str, dict[Edge, Fraction]] = {}
    current: str | None = None

    for lineno, tokens in lines[1:]:
        word, col = tokens[0]
        if word == "source":
            _require(tokens, 2, lineno, "source <id>")
            if source is not None:
                raise ParseError("duplicate 'source' line", lineno, col)
            source = tokens[1][0]
        elif word == "node":
            _require(tokens, 2, lineno, "node <id>")
            name = tokens[1][0]
            if name in nodes or name == source:
                raise ParseError(f"duplicate node {name!r}", lineno, tokens[1][1])
            nodes.append(name)
        elif word == "edge":
            _require(tokens, 3, lineno, "edge <from> <to>")
            edge = (tokens[1][0], tokens[2][0])
            if edge in edges:
                raise ParseError(f"duplicate edge ({edge[0]}, {edge[1]})", lineno, tokens[1][1])
            edges.append(edge)
        elif word == "contractor":
            _require(tokens, 2, lineno, "contractor <id>")
            cid = tokens[1][0]
            if cid in weights:
                raise ParseError(f"duplicate contractor {cid!r}", lineno, tokens[1][1])
            weights[cid] = {}
            current = cid
        elif word == "cost":
            _require(tokens, 4, lineno, "cost <from> <to> <value>")
            if current is None:
                raise ParseError("'cost' before any 'contractor' line", lineno, col)
            edge = (tokens[1][0], tokens[2][0])
            if edge in weights[current]:
                raise ParseError(
                    f"duplicate cost for edge ({edge[0]}, {edge[1]})", lineno, tokens[1][1]
                )
            weights[current][edge] = _parse_rational(tokens[3][0], lineno, tokens[3][1])
        else:
            raise ParseError(f"unknown directive {word!r}", lineno, col)

    if source is None:
        raise ParseError("missing 'source' line", len(text.splitlines()) + 1)
    return Instance.build(source, nodes, edges, weights)


def serialize_instance(instance: Instance) -> str:
    """Canonical text form: nodes, edges and contractors in sorted order.

    ``parse_instance(serialize_instance(x)) == x`` for any valid instance.
    """
    out = [HEADER, f"source {instance.dag.source}"]
    out.extend(f"node {n}" for n in instance.dag.nodes)
    out.extend(f"edge {u} {v}" for u, v in instance.dag.edges)
    for cid in instance.contractors:
        out.append(f"contractor {cid}")
        weights = instance.contractor_types[cid].weights
        out.extend(f"cost {u} {v} {weights[(u, v)]}" for u, v in sorted(weights))
    return "\n".join(out) + "\n"


def parse_reports(text: str, instance: Instance) -> ReportProfile:
    """Apply an overlay to the truthful profile of ``instance``.

    All ``cut`` lines are applied before any ``report`` line, so a re-quote
    of an edge that some cut removed is rejected.  The returned profile is
    fully validated.
    """
    cuts: list[tuple[int, int, str, Edge]] = []
    quotes: list[tuple[int, int, str, Edge, Fraction]] = []
    for lineno, tokens in _tokenize(text):
        word, col = tokens[0]
        if word == "cut":
            _require(tokens, 4, lineno, "cut <node> <from> <to>")
            cuts.append((lineno, col, tokens[1][0], (tokens[2][0], tokens[3][0])))
        elif word == "report":
            _require(tokens, 5, lineno, "report <contractor> <from> <to> <value>")
            value = _parse_rational(tokens[4][0], lineno, tokens[4][1])
            quotes.append((lineno, col, tokens[1][0], (tokens[2][0], tokens[3][0]), value))
        else:
            raise ParseError(f"unknown directive {word!r}", lineno, col)

    profile = ReportProfile.truthful(instance)
    edge_set = set(instance.dag.edges)
    for _lineno, _col, node, edge in cuts:
        if node not in instance.node_types:
            raise InvalidReport(f"cut names unknown node {node!r}")
        if edge not in edge_set:
            raise InvalidReport(f"cut names unknown edge ({edge[0]}, {edge[1]})")
        if edge[0] != node:
            raise InvalidReport(
                f"cut names node {node!r} but edge ({edge[0]}, {edge[1]}) is not its own"
            )
        if node == instance.dag.source:
            raise InvalidReport("the source cannot cut its edges")
        profile = profile.with_node_report(node, profile.node_reports[node] - {edge})
    surviving = profile.reported_edges()
    for _lineno, _col, cid, edge, value in quotes:
        if cid not in instance.contractor_types:
            raise UnknownContractor(f"no such contractor: {cid!r}")
        if edge not in edge_set:
            raise InvalidReport(f"report names unknown edge ({edge[0]}, {edge[1]})")
        if edge not in surviving:
            raise InvalidReport(
                f"report re-quotes edge ({edge[0]}, {edge[1]}) that a cut removed"
            )
        if value <= 0:
            raise WeightNotPositive(f"reported cost {value} for edge {edge} is not positive")
        updated = dict(profile.contractor_reports[cid])
        updated[edge] = value
        profile = profile.with_contractor_report(cid, updated)
    validate_reports(instance, profile)
    return profile


def serialize_reports(instance: Instance, reports: ReportProfile) -> str:
    """Overlay text reproducing ``reports`` from the truthful profile."""
    lines: list[str] = []
    for node in instance.dag.all_nodes:
        true_out = set(instance.node_types[node].outgoing)
        cut = sorted(true_out - reports.node_reports[node])
        lines.extend(f"cut {node} {u} {v}" for u, v in cut)
    for cid in instance.contractors:
        true_w = instance.contractor_types[cid].weights
        reported = reports.contractor_reports[cid]
        for edge in sorted(reported):
            if reported[edge] != true_w[edge]:
                lines.append(f"report {cid} {edge[0]} {edge[1]} {reported[edge]}")
    return "\n".join(lines) + ("\n" if lines else "")
