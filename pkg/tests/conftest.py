"""Shared fixtures and independent reference oracles.

The reference helpers compute costs and optima straight from the graph
fields with plain Python loops over all 2^n assignments. They deliberately
share no code with the library's solvers so they can referee them.
"""

from __future__ import annotations

import itertools
import random

import pytest

from partopt import GenSpec, ProblemInstance, TaskGraph, generate


def ref_costs(graph: TaskGraph, bits) -> tuple[int, int, int]:
    """(hp, sp, cut_count) computed from first principles."""
    hp = sum(h for h, b in zip(graph.hw_costs, bits) if b)
    sp = sum(s for s, b in zip(graph.sw_costs, bits) if not b)
    cut = 0
    for u, v, c in graph.edges:
        if bits[u] != bits[v]:
            sp += c
            cut += 1
    return hp, sp, cut


def ref_optimum(instance: ProblemInstance):
    """(min hp, lexicographically smallest witness) over in-budget partitions.

    itertools.product varies the last node fastest, so assignments arrive in
    lexicographic order with index 0 most significant; keeping only strict
    improvements pins the witness to the smallest one.
    """
    best = None
    n = instance.graph.node_count
    for bits in itertools.product((False, True), repeat=n):
        hp, sp, _ = ref_costs(instance.graph, bits)
        if sp <= instance.s0 and (best is None or hp < best[0]):
            best = (hp, bits)
    return best


def ref_feasible(instance: ProblemInstance, h_limit: int) -> bool:
    n = instance.graph.node_count
    for bits in itertools.product((False, True), repeat=n):
        hp, sp, _ = ref_costs(instance.graph, bits)
        if sp <= instance.s0 and hp <= h_limit:
            return True
    return False


_FRACTIONS = (0.25, 0.5, 0.75)


def make_instance(seed: int, n_lo=4, n_hi=16, m_cap=40, cost_hi=20) -> ProblemInstance:
    """One seeded random instance within the standard suite envelope."""
    rng = random.Random(seed)
    n = rng.randint(n_lo, n_hi)
    m = rng.randint(0, min(m_cap, n * (n - 1) // 2))
    spec = GenSpec(
        node_count=n,
        edge_count=m,
        hw_range=(0, cost_hi),
        sw_range=(0, cost_hi),
        comm_range=(0, cost_hi),
        s0_fraction=_FRACTIONS[seed % 3],
        seed=seed,
    )
    return generate(spec)


def random_suite(count: int, base_seed: int = 20_000, **kwargs) -> list[ProblemInstance]:
    return [make_instance(base_seed + i, **kwargs) for i in range(count)]


@pytest.fixture
def two_node() -> ProblemInstance:
    # h=(3,4), s=(5,2), one edge of communication cost 6, budget 5. Small
    # enough to enumerate by hand: the only in-budget partition is
    # all-hardware at hp 7.
    return ProblemInstance(TaskGraph(2, (3, 4), (5, 2), ((0, 1, 6),)), 5)


@pytest.fixture(scope="session")
def small_suite() -> list[ProblemInstance]:
    """Instances small enough for the pure-Python reference enumeration."""
    return random_suite(40, base_seed=5_000, n_lo=2, n_hi=10)
