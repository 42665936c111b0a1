"""Bounded decision procedure: does any partition fit both cost limits?

``feasible(instance, h_limit)`` answers whether some partition satisfies
S_P <= s0 and H_P <= h_limit, returning the witness when one exists. It is
the assume/assert split of a bounded checker recast as a deterministic
branch-and-prune search: the software budget filters candidate assignments,
and finding one at or under the hardware threshold is the "violation" whose
counterexample is the witness partition.

The search is complete, so an Infeasible verdict is a proof that no
partition fits. Verdicts, witnesses and node counts are reproducible: the
branching order and value order are fixed and nothing depends on timing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum

from .graph import Partition, ProblemInstance

# Cancellation and deadline checks happen once per this many search nodes,
# bounding the latency of a batch cancellation without per-node overhead.
CANCEL_CHECK_INTERVAL = 4096


class Outcome(Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    CANCELLED = "Cancelled"
    TIMEOUT = "Timeout"


@dataclass(frozen=True)
class OracleVerdict:
    outcome: Outcome
    witness: Partition | None
    nodes_explored: int

    @property
    def is_feasible(self) -> bool:
        return self.outcome is Outcome.FEASIBLE


@dataclass(frozen=True)
class PartialAssignment:
    """Search state: each node is hardware (True), software (False) or None.

    Committed sums ride along so bound evaluation does not rescan the cost
    arrays; ``from_states`` computes them, keeping the record consistent by
    construction.
    """

    states: tuple[bool | None, ...]
    committed_hw: int
    committed_sw_nodes: int

    @classmethod
    def from_states(cls, graph, states) -> "PartialAssignment":
        states = tuple(states)
        hw = sum(h for h, x in zip(graph.hw_costs, states) if x is True)
        sw = sum(s for s, x in zip(graph.sw_costs, states) if x is False)
        return cls(states=states, committed_hw=hw, committed_sw_nodes=sw)


def min_residual_software(instance: ProblemInstance, partial: PartialAssignment) -> int:
    """Admissible lower bound on S_P over all completions of ``partial``.

    Counts only what is already forced: software costs of nodes committed to
    software, plus communication on edges whose endpoints are committed to
    different contexts. Undecided nodes contribute nothing, so the bound
    never exceeds the cheapest completion.
    """
    bound = partial.committed_sw_nodes
    states = partial.states
    for u, v, c in instance.graph.edges:
        su, sv = states[u], states[v]
        if su is not None and sv is not None and su != sv:
            bound += c
    return bound


class _Interrupt(Exception):
    def __init__(self, outcome: Outcome):
        self.outcome = outcome


def feasible(
    instance: ProblemInstance,
    h_limit: int,
    *,
    deadline: float | None = None,
    cancel=None,
) -> OracleVerdict:
    """Complete search for a partition with S_P <= s0 and H_P <= h_limit.

    ``deadline`` is an absolute ``time.monotonic()`` value; ``cancel`` is any
    object with ``is_set()`` (a threading or multiprocessing event). Both are
    polled every CANCEL_CHECK_INTERVAL search nodes and map to the TIMEOUT
    and CANCELLED outcomes.

    Branching assigns nodes in descending hardware cost (ties by index) and
    tries software before hardware, which biases the first witness found
    toward low hardware cost. Pruning drops a branch when its committed
    hardware exceeds ``h_limit`` or when an edge-aware refinement of
    ``min_residual_software`` exceeds the budget; the refinement adds, for
    each undecided node, the cheaper of its two contexts given the
    communication already forced on it by committed neighbours, which is
    still a lower bound on every completion.
    """
    if h_limit < 0:
        raise ValueError("h_limit must be non-negative")
    graph = instance.graph
    n = graph.node_count
    s0 = instance.s0

    order = sorted(range(n), key=lambda i: (-graph.hw_costs[i], i))
    pos = [0] * n
    for j, node in enumerate(order):
        pos[node] = j
    h = [graph.hw_costs[i] for i in order]
    s = [graph.sw_costs[i] for i in order]
    # Positions are decided in ascending order, so an edge only needs to be
    # visited from its earlier endpoint: fwd[j] lists neighbours after j.
    fwd: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v, c in graph.edges:
        ju, jv = pos[u], pos[v]
        if ju < jv:
            fwd[ju].append((jv, c))
        else:
            fwd[jv].append((ju, c))

    SW, HW = 0, 1
    state = [-1] * n
    # Communication already forced onto each undecided node by decided
    # neighbours, split by the neighbour's context. A free node j can still
    # complete for as little as min(s[j] + cut_hw[j], cut_sw[j]).
    cut_hw = [0] * n
    cut_sw = [0] * n

    explored = 0
    check_mask = CANCEL_CHECK_INTERVAL - 1

    def check_interrupts() -> None:
        if cancel is not None and cancel.is_set():
            raise _Interrupt(Outcome.CANCELLED)
        if deadline is not None and time.monotonic() > deadline:
            raise _Interrupt(Outcome.TIMEOUT)

    def dfs(j: int, hw_sum: int, sw_sum: int, residual: int):
        # sw_sum = committed software-node cost plus committed cut cost;
        # residual = admissible estimate for the still-free nodes.
        nonlocal explored
        if j == n:
            return tuple(state)
        sj = s[j]
        hj = h[j]
        edges_out = fwd[j]
        own_term = min(sj + cut_hw[j], cut_sw[j])
        for val in (SW, HW):
            explored += 1
            if explored & check_mask == 0:
                check_interrupts()
            if val == SW:
                new_hw = hw_sum
                new_sw = sw_sum + sj + cut_hw[j]
            else:
                new_hw = hw_sum + hj
                if new_hw > h_limit:
                    continue
                new_sw = sw_sum + cut_sw[j]
            if new_sw > s0:
                continue
            state[j] = val
            new_res = residual - own_term
            if val == HW:
                for k, c in edges_out:
                    old = min(s[k] + cut_hw[k], cut_sw[k])
                    cut_hw[k] += c
                    new_res += min(s[k] + cut_hw[k], cut_sw[k]) - old
            else:
                for k, c in edges_out:
                    old = min(s[k] + cut_hw[k], cut_sw[k])
                    cut_sw[k] += c
                    new_res += min(s[k] + cut_hw[k], cut_sw[k]) - old
            if new_sw + new_res <= s0:
                found = dfs(j + 1, new_hw, new_sw, new_res)
                if found is not None:
                    return found
            if val == HW:
                for k, c in edges_out:
                    cut_hw[k] -= c
            else:
                for k, c in edges_out:
                    cut_sw[k] -= c
        state[j] = -1
        return None

    try:
        check_interrupts()
        solution = dfs(0, 0, 0, 0)
    except _Interrupt as stop:
        return OracleVerdict(stop.outcome, None, explored)
    if solution is None:
        return OracleVerdict(Outcome.INFEASIBLE, None, explored)
    witness = tuple(solution[pos[i]] == HW for i in range(n))
    return OracleVerdict(Outcome.FEASIBLE, witness, explored)
