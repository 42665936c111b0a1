"""Command-line surface tying the solvers, generator, and bench together.

Subcommands:

* ``solve <file> --strategy ...`` runs one strategy and prints the answer.
* ``gen`` writes a random instance from shape/cost flags.
* ``bench <files...>`` runs a strategy portfolio and writes the CSV report,
  rendering companion figures next to it unless ``--no-plots``.
* ``export-ilp <file>`` writes the 0/1 matrix form of an instance.

Exit codes: 0 solved, 2 no partition in range ("Violation not found"),
3 timeout, 4 input error, 5 memory limit, 64 usage error. Every option can
also be supplied from a ``key=value`` config file via ``--config``; explicit
flags win over the file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from types import SimpleNamespace

from .bench import (
    DEFAULT_BENCH_STRATEGIES,
    DEFAULT_MEMORY_LIMIT_BYTES,
    STRATEGIES,
    SolverOptions,
    run_bench,
    run_strategy,
)
from .bnb import build_ilp, format_ilp
from .brute import DEFAULT_NODE_LIMIT
from .errors import ConfigError, PartoptError
from .ga import GaConfig
from .generator import GenSpec, generate
from .graph import partition_bits
from .instance_io import load_instance, save_instance, write_instance
from .result import DEFAULT_TIMEOUT, OptResult, SolveStatus

EXIT_SOLVED = 0
EXIT_INFEASIBLE = 2
EXIT_TIMEOUT = 3
EXIT_INPUT = 4
EXIT_MEMORY = 5
EXIT_USAGE = 64

_STATUS_EXIT = {
    SolveStatus.SOLVED: EXIT_SOLVED,
    SolveStatus.INFEASIBLE: EXIT_INFEASIBLE,
    SolveStatus.TIMEOUT: EXIT_TIMEOUT,
    SolveStatus.MEMORY_OUT: EXIT_MEMORY,
}


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _c_int(text: str) -> int:
    return int(text)


def _c_float(text: str) -> float:
    return float(text)


def _c_str(text: str) -> str:
    return text


def _c_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _c_int_pair(text: str) -> tuple[int, int]:
    parts = text.replace(",", " ").split()
    if len(parts) != 2:
        raise ConfigError(f"expected two integers, got {text!r}")
    return int(parts[0]), int(parts[1])


def _c_strategies(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


_GA_TABLE = {
    "ga_population": (_c_int, 500),
    "ga_elite": (_c_int, 50),
    "ga_generations": (_c_int, 75),
    "ga_mutation_rate": (_c_float, None),
    "ga_crossover_rate": (_c_float, 0.9),
    "ga_tournament_size": (_c_int, 2),
    "ga_penalty_weight": (_c_int, None),
}

_SOLVER_TABLE = {
    "timeout": (_c_float, DEFAULT_TIMEOUT),
    "workers": (_c_int, 0),
    "executor": (_c_str, "process"),
    "node_limit": (_c_int, DEFAULT_NODE_LIMIT),
    "memory_limit_mb": (_c_float, None),
    "seed": (_c_int, 0),
    **_GA_TABLE,
}

_SOLVE_TABLE = {
    "strategy": (_c_str, "sequential"),
    "hmin": (_c_int, 0),
    "hmax": (_c_int, None),
    **_SOLVER_TABLE,
}

_BENCH_TABLE = {
    "strategies": (_c_strategies, DEFAULT_BENCH_STRATEGIES),
    "output": (_c_str, "bench_report.csv"),
    "plots": (_c_bool, True),
    **_SOLVER_TABLE,
    "memory_limit_mb": (_c_float, DEFAULT_MEMORY_LIMIT_BYTES / 2**20),
}

_GEN_TABLE = {
    "h_range": (_c_int_pair, (0, 20)),
    "s_range": (_c_int_pair, (0, 20)),
    "c_range": (_c_int_pair, (0, 20)),
    "s0": (_c_int, None),
    "s0_fraction": (_c_float, None),
    "seed": (_c_int, 0),
    "output": (_c_str, None),
}


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _merge(args: argparse.Namespace, table: dict) -> SimpleNamespace:
    """Resolve each option: explicit flag, then config file, then default."""
    config = _read_config_file(args.config) if getattr(args, "config", None) else {}
    values = {}
    for dest, (convert, fallback) in table.items():
        given = getattr(args, dest, None)
        if given is not None:
            values[dest] = given
        elif dest in config:
            values[dest] = convert(config[dest])
        else:
            values[dest] = fallback
    return SimpleNamespace(**values)


def _ga_config(vals: SimpleNamespace) -> GaConfig:
    return GaConfig(
        population_size=vals.ga_population,
        elite_count=vals.ga_elite,
        generations=vals.ga_generations,
        mutation_rate=vals.ga_mutation_rate,
        crossover_rate=vals.ga_crossover_rate,
        tournament_size=vals.ga_tournament_size,
        penalty_weight=vals.ga_penalty_weight,
        seed=vals.seed,
    )


def _memory_bytes(limit_mb: float | None) -> int | None:
    return None if limit_mb is None else int(limit_mb * 2**20)


def _solver_options(vals: SimpleNamespace, h_min: int = 0, h_max: int | None = None) -> SolverOptions:
    if vals.executor not in ("process", "thread"):
        raise ConfigError(f"unknown executor {vals.executor!r}")
    return SolverOptions(
        timeout=vals.timeout,
        workers=vals.workers,
        h_min=h_min,
        h_max=h_max,
        ga=_ga_config(vals),
        node_limit=vals.node_limit,
        memory_limit_bytes=_memory_bytes(vals.memory_limit_mb),
        executor=vals.executor,
    )


def _print_result(result: OptResult) -> None:
    print(f"strategy {result.strategy}")
    print(f"status {result.status.value}")
    if result.message:
        print(result.message)
    print(f"hp {result.optimum_hp if result.optimum_hp is not None else '-'}")
    print(f"sp {result.sp_at_witness if result.sp_at_witness is not None else '-'}")
    print(f"witness {partition_bits(result.witness) if result.witness is not None else '-'}")
    print(f"probes {result.probes}")
    print(f"elapsed {result.elapsed:.6f}")


def _cmd_solve(args: argparse.Namespace) -> int:
    vals = _merge(args, _SOLVE_TABLE)
    if vals.strategy not in STRATEGIES:
        raise ConfigError(f"unknown strategy {vals.strategy!r}; choose from {', '.join(STRATEGIES)}")
    instance = load_instance(args.file)
    opts = _solver_options(vals, h_min=vals.hmin, h_max=vals.hmax)
    result = run_strategy(vals.strategy, instance, opts)
    _print_result(result)
    return _STATUS_EXIT[result.status]


def _cmd_gen(args: argparse.Namespace) -> int:
    vals = _merge(args, _GEN_TABLE)
    if vals.s0 is None and vals.s0_fraction is None:
        vals.s0_fraction = 0.5
    spec = GenSpec(
        node_count=args.nodes,
        edge_count=args.edges,
        hw_range=tuple(vals.h_range),
        sw_range=tuple(vals.s_range),
        comm_range=tuple(vals.c_range),
        s0=vals.s0,
        s0_fraction=vals.s0_fraction,
        seed=vals.seed,
    )
    instance = generate(spec)
    if vals.output:
        save_instance(instance, vals.output)
        print(f"wrote {vals.output}")
    else:
        sys.stdout.write(write_instance(instance))
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    vals = _merge(args, _BENCH_TABLE)
    named = [(Path(name).stem, load_instance(name)) for name in args.files]
    opts = _solver_options(vals)
    report = run_bench(named, vals.strategies, opts)
    out = Path(vals.output)
    out.write_text(report.to_csv())
    print(f"wrote {out}")
    for row in report.rows:
        summary = ", ".join(
            f"{strat}={row.cells[strat].status}" for strat in report.strategies
        )
        print(f"  {row.name}: {summary}")
    if vals.plots:
        # Deferred import: matplotlib is only loaded when figures are wanted.
        from .plots import render_bench_figures

        for path in render_bench_figures(report, out):
            print(f"wrote {path}")
    return 0


def _cmd_export_ilp(args: argparse.Namespace) -> int:
    instance = load_instance(args.file)
    text = format_ilp(build_ilp(instance))
    if args.output:
        Path(args.output).write_text(text)
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(text)
    return 0


def _add_config_flag(parser) -> None:
    parser.add_argument("--config", metavar="FILE", help="key=value defaults; flags take precedence")


def _add_solver_flags(parser) -> None:
    parser.add_argument("--timeout", type=float, metavar="SECS")
    parser.add_argument("--workers", type=int, metavar="N", help="parallel sweep width (0 = all cores)")
    parser.add_argument("--executor", choices=("process", "thread"))
    parser.add_argument("--node-limit", type=int, metavar="N", help="brute-force size cap")
    parser.add_argument("--memory-limit-mb", type=float, metavar="MB")
    parser.add_argument("--seed", type=int, metavar="S")
    parser.add_argument("--ga-population", type=int, metavar="N")
    parser.add_argument("--ga-elite", type=int, metavar="N")
    parser.add_argument("--ga-generations", type=int, metavar="N")
    parser.add_argument("--ga-mutation-rate", type=float, metavar="R")
    parser.add_argument("--ga-crossover-rate", type=float, metavar="R")
    parser.add_argument("--ga-tournament-size", type=int, metavar="N")
    parser.add_argument("--ga-penalty-weight", type=int, metavar="W")


def build_parser() -> _Parser:
    parser = _Parser(prog="partopt", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    solve = sub.add_parser("solve", help="run one strategy on an instance file")
    solve.add_argument("file")
    solve.add_argument("--strategy", choices=STRATEGIES)
    solve.add_argument("--hmin", type=int, metavar="K")
    solve.add_argument("--hmax", type=int, metavar="K")
    _add_solver_flags(solve)
    _add_config_flag(solve)
    solve.set_defaults(handler=_cmd_solve)

    gen = sub.add_parser("gen", help="write a seeded random instance")
    gen.add_argument("--nodes", type=int, required=True)
    gen.add_argument("--edges", type=int, required=True)
    gen.add_argument("--h-range", type=int, nargs=2, metavar=("LO", "HI"))
    gen.add_argument("--s-range", type=int, nargs=2, metavar=("LO", "HI"))
    gen.add_argument("--c-range", type=int, nargs=2, metavar=("LO", "HI"))
    gen.add_argument("--s0", type=int, metavar="V", help="absolute budget")
    gen.add_argument("--s0-fraction", type=float, metavar="F", help="budget as a fraction of total software cost")
    gen.add_argument("--seed", type=int, metavar="S")
    gen.add_argument("--output", metavar="FILE")
    _add_config_flag(gen)
    gen.set_defaults(handler=_cmd_gen)

    bench = sub.add_parser("bench", help="run a strategy portfolio and write a CSV report")
    bench.add_argument("files", nargs="+")
    bench.add_argument("--strategies", type=_c_strategies, metavar="LIST", help="comma-separated strategy names")
    bench.add_argument("--output", metavar="CSV")
    bench.add_argument("--plots", action=argparse.BooleanOptionalAction, help="render figures next to the CSV")
    _add_solver_flags(bench)
    _add_config_flag(bench)
    bench.set_defaults(handler=_cmd_bench)

    export = sub.add_parser("export-ilp", help="write the 0/1 matrix form of an instance")
    export.add_argument("file")
    export.add_argument("--output", metavar="FILE")
    _add_config_flag(export)
    export.set_defaults(handler=_cmd_export_ilp)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "handler"):
        parser.print_help()
        return EXIT_USAGE
    try:
        return args.handler(args)
    except PartoptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
