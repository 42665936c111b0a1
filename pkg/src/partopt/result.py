"""Common result record returned by every solver strategy."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .graph import Partition

# Report line required when a sweep exhausts its threshold range without
# finding any feasible partition.
VIOLATION_NOT_FOUND = "Violation not found"

DEFAULT_TIMEOUT = 7200.0


class SolveStatus(Enum):
    SOLVED = "Solved"
    INFEASIBLE = "InfeasibleInstance"
    TIMEOUT = "Timeout"
    MEMORY_OUT = "MemoryOut"


@dataclass(frozen=True)
class OptResult:
    """Outcome of one optimization run.

    ``optimum_hp``, ``witness`` and ``sp_at_witness`` are all present and
    mutually consistent when status is SOLVED. On TIMEOUT or MEMORY_OUT they
    hold the best feasible incumbent found so far, when one exists.
    ``probes`` counts the strategy's unit of work: oracle calls for sweeps,
    tree expansions for branch-and-bound, fitness evaluations for the
    genetic algorithm, and evaluated partitions for brute force.
    """

    status: SolveStatus
    strategy: str
    optimum_hp: int | None = None
    witness: Partition | None = None
    sp_at_witness: int | None = None
    probes: int = 0
    elapsed: float = 0.0
    message: str | None = None

    @property
    def solved(self) -> bool:
        return self.status is SolveStatus.SOLVED
