"""Exact minimizer: best-first branch-and-bound plus a 0/1 matrix export.

``minimize`` finds the least hardware cost over all partitions meeting the
software budget, without sweeping thresholds: it searches assignments
directly, bounded below by the hardware cost already committed.

``build_ilp`` exports the equivalent 0/1 program for external solvers. The
communication term |x_u - x_v| is linearized with one binary slack y_e per
edge, constrained by y_e >= x_u - x_v and y_e >= x_v - x_u. Declaring the
slacks continuous in [0, 1] instead would admit exactly the same set of
x-assignments: the budget row only improves as y_e shrinks toward
|x_u - x_v|, so any relaxation of y is dominated by the binary choice.
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass

import numpy as np

from .graph import ProblemInstance, all_hardware, evaluate, hmax
from .limits import memory_exceeded
from .result import DEFAULT_TIMEOUT, OptResult, SolveStatus

# Deadline and memory polls happen once per this many expansions.
_CHECK_INTERVAL = 4096


@dataclass(frozen=True)
class IlpModel:
    """min objective . z subject to constraint_matrix . z <= bounds, z binary.

    Variables are ordered x_0..x_{n-1} (node assignments) then y_0..y_{m-1}
    (edge slacks); ``variable_kinds`` labels each column 'x' or 'y'. Row 0 is
    the software budget with the constant moved to the right-hand side:
    -s.x + c.y <= s0 - sum(s). Rows 2e+1 and 2e+2 are the slack bounds of
    edge e.
    """

    objective: np.ndarray
    constraint_matrix: np.ndarray
    bounds: np.ndarray
    variable_kinds: tuple[str, ...]

    @property
    def variable_count(self) -> int:
        return self.objective.shape[0]

    @property
    def row_count(self) -> int:
        return self.bounds.shape[0]


def build_ilp(instance: ProblemInstance) -> IlpModel:
    """Matrix form of the partitioning problem for this instance."""
    graph = instance.graph
    n, m = graph.node_count, graph.edge_count
    nvars = n + m
    objective = np.zeros(nvars, dtype=np.int64)
    objective[:n] = graph.hw_costs

    rows = np.zeros((1 + 2 * m, nvars), dtype=np.int64)
    bounds = np.zeros(1 + 2 * m, dtype=np.int64)
    rows[0, :n] = [-s for s in graph.sw_costs]
    for e, (_, _, c) in enumerate(graph.edges):
        rows[0, n + e] = c
    bounds[0] = instance.s0 - sum(graph.sw_costs)
    for e, (u, v, _) in enumerate(graph.edges):
        rows[1 + 2 * e, u] = 1
        rows[1 + 2 * e, v] = -1
        rows[1 + 2 * e, n + e] = -1
        rows[2 + 2 * e, u] = -1
        rows[2 + 2 * e, v] = 1
        rows[2 + 2 * e, n + e] = -1
    kinds = ("x",) * n + ("y",) * m
    return IlpModel(objective=objective, constraint_matrix=rows, bounds=bounds, variable_kinds=kinds)


def format_ilp(model: IlpModel) -> str:
    """Plain-text listing: objective, variable kinds, then one row per line
    as coefficients followed by its upper bound."""
    lines = [f"ilp {model.variable_count} {model.row_count}"]
    lines.append("objective " + " ".join(str(c) for c in model.objective))
    lines.append("kinds " + " ".join(model.variable_kinds))
    for row, bound in zip(model.constraint_matrix, model.bounds):
        lines.append("row " + " ".join(str(c) for c in row) + " <= " + str(bound))
    return "\n".join(lines) + "\n"


def minimize(
    instance: ProblemInstance,
    timeout: float = DEFAULT_TIMEOUT,
    *,
    memory_limit_bytes: int | None = None,
    on_incumbent=None,
) -> OptResult:
    """Best-first branch-and-bound for the minimal-hardware partition.

    The lower bound of a subproblem is its committed hardware cost (free
    nodes can always stay in software at zero hardware cost); feasibility
    pruning uses the committed part of the software cost, the same
    admissible bound the decision oracle exposes. Branching follows the
    oracle's order, descending hardware cost with software tried first, so
    runs are deterministic. The incumbent starts at the all-hardware
    partition, which is feasible for every non-negative budget, so a timeout
    still reports a valid feasible answer. ``on_incumbent`` is called with
    each strictly improving hardware cost as it is found.
    """
    graph = instance.graph
    n = graph.node_count
    s0 = instance.s0
    start = time.monotonic()
    deadline = start + timeout

    order = sorted(range(n), key=lambda i: (-graph.hw_costs[i], i))
    pos = [0] * n
    for j, node in enumerate(order):
        pos[node] = j
    h = [graph.hw_costs[i] for i in order]
    s = [graph.sw_costs[i] for i in order]
    back: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v, c in graph.edges:
        ju, jv = pos[u], pos[v]
        if ju < jv:
            back[jv].append((ju, c))
        else:
            back[ju].append((jv, c))

    incumbent_hp = hmax(graph)
    incumbent = all_hardware(n)
    if on_incumbent is not None:
        on_incumbent(incumbent_hp)

    # Heap entries: (hardware lower bound, insertion counter, depth,
    # committed software cost, assignment cell). Cells are (parent, value)
    # chains; materializing prefixes only at expansion keeps nodes small.
    counter = itertools.count()
    heap = [(0, next(counter), 0, 0, None)]
    expansions = 0

    def prefix_of(cell) -> list[int]:
        values: list[int] = []
        while cell is not None:
            cell, val = cell[0], cell[1]
            values.append(val)
        values.reverse()
        return values

    while heap:
        expansions += 1
        if expansions == 1 or expansions % _CHECK_INTERVAL == 0:
            if time.monotonic() > deadline:
                return _best_so_far(SolveStatus.TIMEOUT, instance, incumbent, expansions, start)
            if memory_exceeded(memory_limit_bytes):
                return _best_so_far(SolveStatus.MEMORY_OUT, instance, incumbent, expansions, start)
        hw, _, depth, sw, cell = heapq.heappop(heap)
        if hw >= incumbent_hp:
            # Best-first order: every remaining subproblem is at least as
            # expensive, so the incumbent is optimal.
            break
        if depth == n:
            # sw <= s0 was enforced on push, so this leaf is feasible.
            incumbent_hp = hw
            values = prefix_of(cell)
            incumbent = tuple(values[pos[i]] == 1 for i in range(n))
            if on_incumbent is not None:
                on_incumbent(incumbent_hp)
            continue
        values = prefix_of(cell)
        cut_sw = cut_hw = 0
        for k, c in back[depth]:
            if values[k] == 1:
                cut_hw += c
            else:
                cut_sw += c
        sw_child = sw + s[depth] + cut_hw
        if sw_child <= s0:
            heapq.heappush(heap, (hw, next(counter), depth + 1, sw_child, (cell, 0)))
        hw_child = hw + h[depth]
        sw_keep = sw + cut_sw
        if hw_child < incumbent_hp and sw_keep <= s0:
            heapq.heappush(heap, (hw_child, next(counter), depth + 1, sw_keep, (cell, 1)))

    return _best_so_far(SolveStatus.SOLVED, instance, incumbent, expansions, start)


def _best_so_far(status, instance, witness, expansions, start) -> OptResult:
    rep = evaluate(instance, witness)
    return OptResult(
        status=status,
        strategy="bnb",
        optimum_hp=rep.hp,
        witness=witness,
        sp_at_witness=rep.sp,
        probes=expansions,
        elapsed=time.monotonic() - start,
    )
