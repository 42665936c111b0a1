"""Hardware/software task-graph bipartitioning under a software-cost budget.

Given a task graph with per-node hardware and software costs and per-edge
communication costs, find the partition minimizing total hardware cost
subject to a bound on software-plus-communication cost. The package offers
exact solvers (threshold sweeps over a decision oracle, sequential or as a
parallel batch portfolio, binary search, and branch-and-bound), a tuned
genetic heuristic, a brute-force referee, instance file IO, a seeded
generator, and a benchmark harness with CSV and figure output.
"""

from .bench import (
    DEFAULT_BENCH_STRATEGIES,
    STRATEGIES,
    BenchReport,
    BenchRow,
    SolverOptions,
    StrategyCell,
    run_bench,
    run_strategy,
)
from .bnb import IlpModel, build_ilp, format_ilp, minimize
from .brute import DEFAULT_NODE_LIMIT, brute_feasible, enumerate_partitions
from .errors import (
    ConfigError,
    DimensionError,
    FormatError,
    GenSpecError,
    NodeLimitError,
    PartoptError,
)
from .ga import GaConfig, default_penalty_weight, fitness, ga_solve
from .generator import GenSpec, generate
from .graph import (
    CostReport,
    Partition,
    ProblemInstance,
    TaskGraph,
    all_hardware,
    all_software,
    evaluate,
    hardware_cost,
    hmax,
    incidence_rows,
    partition_bits,
    software_cost,
    validate,
)
from .instance_io import load_instance, parse_instance, save_instance, write_instance
from .oracle import (
    Outcome,
    OracleVerdict,
    PartialAssignment,
    feasible,
    min_residual_software,
)
from .result import DEFAULT_TIMEOUT, VIOLATION_NOT_FOUND, OptResult, SolveStatus
from .sweep import SweepConfig, sweep_binary, sweep_parallel, sweep_sequential

__version__ = "0.1.0"

__all__ = [
    "BenchReport",
    "BenchRow",
    "ConfigError",
    "CostReport",
    "DEFAULT_BENCH_STRATEGIES",
    "DEFAULT_NODE_LIMIT",
    "DEFAULT_TIMEOUT",
    "DimensionError",
    "FormatError",
    "GaConfig",
    "GenSpec",
    "GenSpecError",
    "IlpModel",
    "NodeLimitError",
    "OptResult",
    "OracleVerdict",
    "Outcome",
    "PartialAssignment",
    "PartoptError",
    "Partition",
    "ProblemInstance",
    "STRATEGIES",
    "SolveStatus",
    "SolverOptions",
    "StrategyCell",
    "SweepConfig",
    "TaskGraph",
    "VIOLATION_NOT_FOUND",
    "all_hardware",
    "all_software",
    "brute_feasible",
    "build_ilp",
    "default_penalty_weight",
    "enumerate_partitions",
    "evaluate",
    "feasible",
    "fitness",
    "format_ilp",
    "ga_solve",
    "generate",
    "hardware_cost",
    "hmax",
    "incidence_rows",
    "load_instance",
    "min_residual_software",
    "minimize",
    "parse_instance",
    "partition_bits",
    "run_bench",
    "run_strategy",
    "save_instance",
    "software_cost",
    "sweep_binary",
    "sweep_parallel",
    "sweep_sequential",
    "validate",
    "write_instance",
]
