"""Seeded random instance generator.

Stands in for benchmark graphs whose cost data is not publicly printed:
structure and magnitudes are configurable, and the same spec always yields
the same instance. Edges are a uniform sample of the distinct unordered
pairs, stored with the lower index first.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import GenSpecError
from .graph import ProblemInstance, TaskGraph, validate


@dataclass(frozen=True)
class GenSpec:
    """Shape and cost ranges for one random instance.

    Exactly one budget policy must be set: ``s0`` (absolute) or
    ``s0_fraction`` (floor of the fraction of the total software cost).
    Ranges are inclusive.
    """

    node_count: int
    edge_count: int
    hw_range: tuple[int, int] = (0, 20)
    sw_range: tuple[int, int] = (0, 20)
    comm_range: tuple[int, int] = (0, 20)
    s0: int | None = None
    s0_fraction: float | None = None
    seed: int = 0

    def validated(self) -> "GenSpec":
        if self.node_count < 1:
            raise GenSpecError("node_count must be at least 1")
        capacity = self.node_count * (self.node_count - 1) // 2
        if not 0 <= self.edge_count <= capacity:
            raise GenSpecError(
                f"edge_count {self.edge_count} exceeds the simple-graph capacity {capacity} "
                f"of {self.node_count} nodes"
            )
        for name in ("hw_range", "sw_range", "comm_range"):
            lo, hi = getattr(self, name)
            if lo < 0 or hi < lo:
                raise GenSpecError(f"{name} must be 0 <= lo <= hi, got ({lo}, {hi})")
        if (self.s0 is None) == (self.s0_fraction is None):
            raise GenSpecError("set exactly one of s0 and s0_fraction")
        if self.s0 is not None and self.s0 < 0:
            raise GenSpecError("s0 must be non-negative")
        if self.s0_fraction is not None and self.s0_fraction < 0:
            raise GenSpecError("s0_fraction must be non-negative")
        return self


def _unrank_pair(index: int, n: int) -> tuple[int, int]:
    # Pairs are ordered (0,1)..(0,n-1), (1,2).., so row u holds n-1-u pairs.
    u = 0
    row = n - 1
    while index >= row:
        index -= row
        u += 1
        row -= 1
    return u, u + 1 + index


def generate(spec: GenSpec) -> ProblemInstance:
    """Materialize the instance described by ``spec``; same spec, same result."""
    spec = spec.validated()
    rng = random.Random(spec.seed)
    n = spec.node_count
    hw = [rng.randint(*spec.hw_range) for _ in range(n)]
    sw = [rng.randint(*spec.sw_range) for _ in range(n)]
    capacity = n * (n - 1) // 2
    picks = sorted(rng.sample(range(capacity), spec.edge_count))
    edges = []
    for index in picks:
        u, v = _unrank_pair(index, n)
        edges.append((u, v, rng.randint(*spec.comm_range)))
    if spec.s0 is not None:
        s0 = spec.s0
    else:
        s0 = int(spec.s0_fraction * sum(sw))
    graph = TaskGraph(n, tuple(hw), tuple(sw), tuple(edges))
    problems = validate(graph)
    if problems:
        raise GenSpecError("generated graph failed validation: " + "; ".join(problems))
    return ProblemInstance(graph=graph, s0=s0)
