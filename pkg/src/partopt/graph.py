"""Task graphs, partitions, and the cost arithmetic every solver consumes.

A system is a directed simple graph. Each node carries a hardware cost
(abstract area units, paid when the node is implemented in hardware) and a
software cost (time units, paid when it runs in software). Each edge carries
a communication cost that is paid only when its endpoints end up in
different contexts. A partition assigns every node to exactly one context.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

# All cost arithmetic must stay within a signed 64-bit range; totals are
# checked at load time so solvers can rely on it.
INT64_MAX = 2**63 - 1

# A partition is a flat assignment vector: True puts the node in hardware,
# False leaves it in software.
Partition = tuple[bool, ...]

Edge = tuple[int, int, int]


@dataclass(frozen=True)
class TaskGraph:
    """Immutable task graph: per-node costs plus weighted communication edges.

    Edge direction is kept as given (the input is a directed graph) but all
    cost semantics treat edges as unordered pairs: communication is paid
    whenever the two endpoints sit in different contexts, whichever way the
    edge points.
    """

    node_count: int
    hw_costs: tuple[int, ...]
    sw_costs: tuple[int, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "hw_costs", tuple(self.hw_costs))
        object.__setattr__(self, "sw_costs", tuple(self.sw_costs))
        object.__setattr__(self, "edges", tuple((int(u), int(v), int(c)) for u, v, c in self.edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class ProblemInstance:
    """A task graph together with the software-cost budget ``s0``."""

    graph: TaskGraph
    s0: int


@dataclass(frozen=True)
class CostReport:
    """Both cost totals of one partition, plus budget compliance."""

    hp: int
    sp: int
    cut_edge_count: int
    feasible: bool


def all_software(node_count: int) -> Partition:
    return (False,) * node_count


def all_hardware(node_count: int) -> Partition:
    return (True,) * node_count


def partition_bits(p: Partition) -> str:
    """Render a partition as a bit string, index 0 first, 1 = hardware."""
    return "".join("1" if x else "0" for x in p)


def _check_partition(graph: TaskGraph, p: Partition) -> None:
    if len(p) != graph.node_count:
        raise DimensionError(
            f"partition has {len(p)} entries but the graph has {graph.node_count} nodes"
        )


def hardware_cost(graph: TaskGraph, p: Partition) -> int:
    """Total hardware cost H_P: sum of hw_costs over nodes assigned True."""
    _check_partition(graph, p)
    return sum(h for h, x in zip(graph.hw_costs, p) if x)


def software_cost(graph: TaskGraph, p: Partition) -> int:
    """Total software cost S_P: software-node costs plus cut-edge costs."""
    _check_partition(graph, p)
    total = sum(s for s, x in zip(graph.sw_costs, p) if not x)
    for u, v, c in graph.edges:
        if p[u] != p[v]:
            total += c
    return total


def cut_edge_count(graph: TaskGraph, p: Partition) -> int:
    _check_partition(graph, p)
    return sum(1 for u, v, _ in graph.edges if p[u] != p[v])


def evaluate(instance: ProblemInstance, p: Partition) -> CostReport:
    """Score one partition against an instance."""
    graph = instance.graph
    _check_partition(graph, p)
    hp = sum(h for h, x in zip(graph.hw_costs, p) if x)
    sp = sum(s for s, x in zip(graph.sw_costs, p) if not x)
    cut = 0
    for u, v, c in graph.edges:
        if p[u] != p[v]:
            sp += c
            cut += 1
    return CostReport(hp=hp, sp=sp, cut_edge_count=cut, feasible=sp <= instance.s0)


def incidence_rows(graph: TaskGraph) -> np.ndarray:
    """Transposed incidence matrix: one row per edge, +1 at u and -1 at v.

    For a 0/1 assignment vector x, |row . x| is 1 exactly when the edge is
    cut, which is what lets the communication term be written as c|Ex|.
    """
    rows = np.zeros((graph.edge_count, graph.node_count), dtype=np.int8)
    for k, (u, v, _) in enumerate(graph.edges):
        rows[k, u] = 1
        rows[k, v] = -1
    return rows


def hmax(graph: TaskGraph) -> int:
    """Hardware cost of the all-hardware partition; upper bound for sweeps."""
    return sum(graph.hw_costs)


def validate(graph: TaskGraph) -> list[str]:
    """Check every structural invariant; return one message per violation.

    An empty list means the graph is well formed. Violations name the
    offending node or edge so loaders can report them precisely.
    """
    problems: list[str] = []
    n = graph.node_count
    if n < 1:
        problems.append("node count must be at least 1")
    if len(graph.hw_costs) != n:
        problems.append(f"expected {n} hardware costs, got {len(graph.hw_costs)}")
    if len(graph.sw_costs) != n:
        problems.append(f"expected {n} software costs, got {len(graph.sw_costs)}")
    for i, h in enumerate(graph.hw_costs):
        if h < 0:
            problems.append(f"node {i} has negative hardware cost {h}")
    for i, s in enumerate(graph.sw_costs):
        if s < 0:
            problems.append(f"node {i} has negative software cost {s}")
    seen: set[tuple[int, int]] = set()
    for k, (u, v, c) in enumerate(graph.edges):
        if not (0 <= u < n) or not (0 <= v < n):
            problems.append(f"edge {k} ({u},{v}) has an endpoint outside 0..{n - 1}")
            continue
        if u == v:
            problems.append(f"edge {k} is a self-loop at node {u}")
            continue
        if c < 0:
            problems.append(f"edge {k} ({u},{v}) has negative communication cost {c}")
        pair = (u, v) if u < v else (v, u)
        if pair in seen:
            problems.append(f"duplicate edge between nodes {pair[0]} and {pair[1]}")
        seen.add(pair)
    if sum(graph.hw_costs) > INT64_MAX:
        problems.append("total hardware cost exceeds the 64-bit integer range")
    if sum(graph.sw_costs) > INT64_MAX:
        problems.append("total software cost exceeds the 64-bit integer range")
    if sum(c for _, _, c in graph.edges) > INT64_MAX:
        problems.append("total communication cost exceeds the 64-bit integer range")
    return problems
