"""Line-oriented instance file format.

The grammar, one record per line with ``#`` comments and blank lines
ignored:

    partopt 1
    nodes <n>
    edges <m>
    s0 <budget>
    node <id> <hw_cost> <sw_cost>     (n lines, ids 0..n-1 in order)
    edge <u> <v> <comm_cost>          (m lines)

All numbers are non-negative integers. ``write_instance`` emits the
canonical form (lowercase keywords, single spaces, nodes then edges in index
order); parsing a written document reproduces the instance exactly.
"""

from __future__ import annotations

from pathlib import Path

from .errors import FormatError
from .graph import INT64_MAX, ProblemInstance, TaskGraph, validate

FORMAT_MAGIC = "partopt"
FORMAT_VERSION = 1


def _int_field(token: str, what: str, lineno: int) -> int:
    if not (token.isascii() and token.isdigit()):
        raise FormatError(f"{what} must be a non-negative integer, got {token!r}", lineno)
    value = int(token)
    if value > INT64_MAX:
        raise FormatError(f"{what} {value} exceeds the 64-bit integer range", lineno)
    return value


def parse_instance(text: str) -> ProblemInstance:
    """Parse a document into a validated instance.

    Raises FormatError with the offending line number on any grammar or
    invariant violation.
    """
    records: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            records.append((lineno, line.split()))

    cursor = 0

    def take(what: str) -> tuple[int, list[str]]:
        nonlocal cursor
        if cursor >= len(records):
            raise FormatError(f"unexpected end of document, expected {what}")
        record = records[cursor]
        cursor += 1
        return record

    lineno, tokens = take(f"format line '{FORMAT_MAGIC} {FORMAT_VERSION}'")
    if tokens != [FORMAT_MAGIC, str(FORMAT_VERSION)]:
        raise FormatError(f"expected format line '{FORMAT_MAGIC} {FORMAT_VERSION}'", lineno)

    def take_keyword(keyword: str, what: str) -> int:
        lineno, tokens = take(f"'{keyword} <{what}>'")
        if len(tokens) != 2 or tokens[0] != keyword:
            raise FormatError(f"expected '{keyword} <{what}>'", lineno)
        return _int_field(tokens[1], what, lineno)

    node_count = take_keyword("nodes", "node count")
    edge_count = take_keyword("edges", "edge count")
    s0 = take_keyword("s0", "software budget")
    if node_count < 1:
        raise FormatError("node count must be at least 1", records[1][0])

    hw_costs: list[int] = []
    sw_costs: list[int] = []
    for i in range(node_count):
        lineno, tokens = take(f"'node {i} <hw> <sw>'")
        if len(tokens) != 4 or tokens[0] != "node":
            raise FormatError(f"expected 'node {i} <hw> <sw>'", lineno)
        node_id = _int_field(tokens[1], "node id", lineno)
        if node_id != i:
            raise FormatError(f"node ids must be dense and in order; expected {i}, got {node_id}", lineno)
        hw_costs.append(_int_field(tokens[2], "hardware cost", lineno))
        sw_costs.append(_int_field(tokens[3], "software cost", lineno))

    edges: list[tuple[int, int, int]] = []
    seen_pairs: set[tuple[int, int]] = set()
    for k in range(edge_count):
        lineno, tokens = take("'edge <u> <v> <cost>'")
        if len(tokens) != 4 or tokens[0] != "edge":
            raise FormatError("expected 'edge <u> <v> <cost>'", lineno)
        u = _int_field(tokens[1], "edge endpoint", lineno)
        v = _int_field(tokens[2], "edge endpoint", lineno)
        c = _int_field(tokens[3], "communication cost", lineno)
        if u >= node_count or v >= node_count:
            raise FormatError(f"edge ({u},{v}) references a node outside 0..{node_count - 1}", lineno)
        if u == v:
            raise FormatError(f"self-loop at node {u}", lineno)
        pair = (u, v) if u < v else (v, u)
        if pair in seen_pairs:
            raise FormatError(f"duplicate edge between nodes {pair[0]} and {pair[1]}", lineno)
        seen_pairs.add(pair)
        edges.append((u, v, c))

    if cursor < len(records):
        raise FormatError("unexpected content after the last edge", records[cursor][0])

    graph = TaskGraph(node_count, tuple(hw_costs), tuple(sw_costs), tuple(edges))
    problems = validate(graph)
    if problems:
        raise FormatError("; ".join(problems))
    return ProblemInstance(graph=graph, s0=s0)


def write_instance(instance: ProblemInstance) -> str:
    """Canonical text form; parse_instance(write_instance(x)) == x."""
    graph = instance.graph
    problems = validate(graph)
    if problems:
        raise ValueError("refusing to serialize an invalid graph: " + "; ".join(problems))
    if instance.s0 < 0:
        raise ValueError("refusing to serialize a negative budget")
    lines = [
        f"{FORMAT_MAGIC} {FORMAT_VERSION}",
        f"nodes {graph.node_count}",
        f"edges {graph.edge_count}",
        f"s0 {instance.s0}",
    ]
    for i in range(graph.node_count):
        lines.append(f"node {i} {graph.hw_costs[i]} {graph.sw_costs[i]}")
    for u, v, c in graph.edges:
        lines.append(f"edge {u} {v} {c}")
    return "\n".join(lines) + "\n"


def load_instance(path) -> ProblemInstance:
    return parse_instance(Path(path).read_text())


def save_instance(instance: ProblemInstance, path) -> None:
    Path(path).write_text(write_instance(instance))
