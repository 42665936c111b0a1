"""Benchmark harness: run strategy portfolios over instance suites.

Each instance/strategy pair becomes one report cell. The genetic algorithm
is measured three times with consecutive seeds and reports the average
elapsed time with the best in-budget answer of the three runs; every other
strategy runs once. Failures never abort the suite, they are recorded in
their cell.

The CSV schema is fixed: ``name,nodes,edges,s0`` followed by four columns
per strategy in the order given (``<s>_hp``, ``<s>_sp``, ``<s>_time_s``,
``<s>_status``), then ``ga_error_pct`` and ``speedup``. Timeouts and
memory-outs put the ``TO``/``MO`` sentinel in the time column and ``-`` in
the value columns; ``speedup`` is sequential elapsed over parallel elapsed
when both solved, and ``ga_error_pct`` is the relative gap to the best
exact answer on the row.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, replace

from .brute import DEFAULT_NODE_LIMIT, enumerate_partitions
from .bnb import minimize
from .errors import ConfigError, PartoptError
from .ga import GaConfig, ga_solve
from .graph import ProblemInstance
from .result import DEFAULT_TIMEOUT, OptResult, SolveStatus
from .sweep import SweepConfig, sweep_binary, sweep_parallel, sweep_sequential

STRATEGIES = ("sequential", "parallel", "binary", "bnb", "ga", "brute")

DEFAULT_BENCH_STRATEGIES = ("sequential", "parallel", "bnb", "ga")

# Order of preference when picking the exact answer a GA run is scored
# against.
_EXACT_PRIORITY = ("brute", "bnb", "sequential", "parallel", "binary")

DEFAULT_MEMORY_LIMIT_BYTES = 24 * 2**30


def _default_workers() -> int:
    return max(1, os.cpu_count() or 1)


@dataclass(frozen=True)
class SolverOptions:
    """Everything needed to run any single strategy on an instance."""

    timeout: float = DEFAULT_TIMEOUT
    workers: int = 0  # 0 means all available cores
    h_min: int = 0
    h_max: int | None = None
    ga: GaConfig = GaConfig()
    node_limit: int = DEFAULT_NODE_LIMIT
    memory_limit_bytes: int | None = None
    executor: str = "process"
    cancellation_on_hit: bool = True

    def effective_workers(self) -> int:
        return self.workers if self.workers > 0 else _default_workers()


def run_strategy(name: str, instance: ProblemInstance, opts: SolverOptions) -> OptResult:
    """Dispatch one solve; the single entry point the CLI and bench share."""
    if name in ("sequential", "parallel", "binary"):
        cfg = SweepConfig(
            h_min=opts.h_min,
            h_max=opts.h_max,
            workers=opts.effective_workers() if name == "parallel" else 1,
            timeout=opts.timeout,
            cancellation_on_hit=opts.cancellation_on_hit,
            executor=opts.executor,
            memory_limit_bytes=opts.memory_limit_bytes,
        )
        runner = {
            "sequential": sweep_sequential,
            "parallel": sweep_parallel,
            "binary": sweep_binary,
        }[name]
        return runner(instance, cfg)
    if name == "bnb":
        return minimize(instance, opts.timeout, memory_limit_bytes=opts.memory_limit_bytes)
    if name == "ga":
        return ga_solve(instance, opts.ga, opts.timeout, memory_limit_bytes=opts.memory_limit_bytes)
    if name == "brute":
        return enumerate_partitions(
            instance,
            opts.node_limit,
            timeout=opts.timeout,
            memory_limit_bytes=opts.memory_limit_bytes,
        )
    raise ConfigError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGIES)}")


@dataclass(frozen=True)
class StrategyCell:
    status: str
    hp: int | None = None
    sp: int | None = None
    elapsed: float | None = None
    error: str | None = None

    @property
    def solved(self) -> bool:
        return self.status == SolveStatus.SOLVED.value


@dataclass(frozen=True)
class BenchRow:
    name: str
    nodes: int
    edges: int
    s0: int
    cells: dict[str, StrategyCell]
    ga_error_pct: float | None = None
    speedup: float | None = None


@dataclass(frozen=True)
class BenchReport:
    strategies: tuple[str, ...]
    rows: tuple[BenchRow, ...]

    def header(self) -> list[str]:
        columns = ["name", "nodes", "edges", "s0"]
        for strat in self.strategies:
            columns += [f"{strat}_hp", f"{strat}_sp", f"{strat}_time_s", f"{strat}_status"]
        columns += ["ga_error_pct", "speedup"]
        return columns

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(self.header())
        for row in self.rows:
            record = [row.name, row.nodes, row.edges, row.s0]
            for strat in self.strategies:
                record += _cell_fields(row.cells[strat])
            record.append("" if row.ga_error_pct is None else f"{row.ga_error_pct:.1f}")
            record.append("" if row.speedup is None else f"{row.speedup:.2f}")
            writer.writerow(record)
        return out.getvalue()


def _cell_fields(cell: StrategyCell) -> list[str]:
    hp = str(cell.hp) if cell.solved and cell.hp is not None else "-"
    sp = str(cell.sp) if cell.solved and cell.sp is not None else "-"
    if cell.status == SolveStatus.TIMEOUT.value:
        time_s = "TO"
    elif cell.status == SolveStatus.MEMORY_OUT.value:
        time_s = "MO"
    elif cell.elapsed is None:
        time_s = "-"
    else:
        time_s = f"{cell.elapsed:.3f}"
    return [hp, sp, time_s, cell.status]


def _cell_from_result(result: OptResult) -> StrategyCell:
    return StrategyCell(
        status=result.status.value,
        hp=result.optimum_hp,
        sp=result.sp_at_witness,
        elapsed=result.elapsed,
    )


def _run_cell(name: str, instance: ProblemInstance, opts: SolverOptions) -> StrategyCell:
    if name == "ga":
        return _run_ga_cell(instance, opts)
    try:
        return _cell_from_result(run_strategy(name, instance, opts))
    except PartoptError as exc:
        return StrategyCell(status="Error", error=str(exc))


def _run_ga_cell(instance: ProblemInstance, opts: SolverOptions) -> StrategyCell:
    # Three seeded runs: best answer, averaged wall clock.
    results = []
    try:
        for offset in range(3):
            cfg = replace(opts.ga, seed=opts.ga.seed + offset)
            results.append(ga_solve(instance, cfg, opts.timeout, memory_limit_bytes=opts.memory_limit_bytes))
    except PartoptError as exc:
        return StrategyCell(status="Error", error=str(exc))
    elapsed = sum(r.elapsed for r in results) / len(results)
    solved = [r for r in results if r.solved]
    if solved:
        best = min(solved, key=lambda r: r.optimum_hp)
        return StrategyCell(
            status=SolveStatus.SOLVED.value, hp=best.optimum_hp, sp=best.sp_at_witness, elapsed=elapsed
        )
    statuses = [r.status for r in results]
    for status in (SolveStatus.TIMEOUT, SolveStatus.MEMORY_OUT):
        if status in statuses:
            return StrategyCell(status=status.value, elapsed=elapsed)
    return StrategyCell(status=results[0].status.value, elapsed=elapsed)


def run_bench(
    named_instances,
    strategies=DEFAULT_BENCH_STRATEGIES,
    opts: SolverOptions = SolverOptions(memory_limit_bytes=DEFAULT_MEMORY_LIMIT_BYTES),
) -> BenchReport:
    """Run each strategy on each (name, instance) pair.

    Rows never abort the suite: failures land in their cell with an error
    message. Returns the report; CSV rendering is ``BenchReport.to_csv``.
    """
    strategies = tuple(strategies)
    if not strategies:
        raise ConfigError("at least one strategy is required")
    for name in strategies:
        if name not in STRATEGIES:
            raise ConfigError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGIES)}")
    rows = []
    for name, instance in named_instances:
        cells = {strat: _run_cell(strat, instance, opts) for strat in strategies}
        rows.append(
            BenchRow(
                name=name,
                nodes=instance.graph.node_count,
                edges=instance.graph.edge_count,
                s0=instance.s0,
                cells=cells,
                ga_error_pct=_ga_error(cells),
                speedup=_speedup(cells),
            )
        )
    return BenchReport(strategies=strategies, rows=tuple(rows))


def _ga_error(cells) -> float | None:
    ga = cells.get("ga")
    if ga is None or not ga.solved or ga.hp is None:
        return None
    for name in _EXACT_PRIORITY:
        exact = cells.get(name)
        if exact is not None and exact.solved and exact.hp is not None:
            if exact.hp == 0:
                return 0.0 if ga.hp == 0 else None
            return 100.0 * (ga.hp - exact.hp) / exact.hp
    return None


def _speedup(cells) -> float | None:
    seq = cells.get("sequential")
    par = cells.get("parallel")
    if seq is None or par is None or not (seq.solved and par.solved):
        return None
    if not par.elapsed:
        return None
    return seq.elapsed / par.elapsed
