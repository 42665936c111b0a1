"""Tuned genetic algorithm: fast, approximate, never reports a budget breach.

Constraint handling is a penalty on the objective rather than extra
variables: with weight at least 1 + total hardware cost, any partition over
budget scores worse than every in-budget one, so selection pressure alone
drives the population toward feasibility. The best in-budget individual
ever observed is the answer; if the exact optimum is known separately, the
gap between the two is the algorithm's error and is worth reporting
alongside the result.

Runs are reproducible: all random draws for a generation are made up front
from one seeded generator, in a fixed order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .graph import Partition, ProblemInstance, evaluate, hmax
from .limits import memory_exceeded
from .result import DEFAULT_TIMEOUT, OptResult, SolveStatus


@dataclass(frozen=True)
class GaConfig:
    """Evolution parameters.

    population_size, elite_count and generations default to the tuned values
    (500 / 50 / 75); the remaining knobs are standard completions. A
    ``mutation_rate`` of None means one expected flip per individual (1/n),
    and a ``penalty_weight`` of None means 1 + the all-hardware cost of the
    instance being solved.
    """

    population_size: int = 500
    elite_count: int = 50
    generations: int = 75
    mutation_rate: float | None = None
    crossover_rate: float = 0.9
    tournament_size: int = 2
    penalty_weight: int | None = None
    seed: int = 0

    def validated(self) -> "GaConfig":
        if not 0 < self.elite_count < self.population_size:
            raise ConfigError("elite_count must satisfy 0 < elite_count < population_size")
        if self.generations < 1:
            raise ConfigError("generations must be at least 1")
        for name in ("crossover_rate", "mutation_rate"):
            rate = getattr(self, name)
            if rate is not None and not 0.0 <= rate <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if self.tournament_size < 1:
            raise ConfigError("tournament_size must be at least 1")
        if self.penalty_weight is not None and self.penalty_weight < 1:
            raise ConfigError("penalty_weight must be at least 1")
        return self


def fitness(instance: ProblemInstance, p: Partition, penalty_weight: int) -> int:
    """Hardware cost plus penalty_weight times the budget excess.

    Equals the hardware cost exactly on feasible partitions.
    """
    if penalty_weight < 1:
        raise ValueError("penalty_weight must be at least 1")
    rep = evaluate(instance, p)
    return rep.hp + penalty_weight * max(0, rep.sp - instance.s0)


def default_penalty_weight(instance: ProblemInstance) -> int:
    """Smallest convenient weight that makes every feasible partition beat
    every infeasible one (any budget excess is a whole unit or more)."""
    return 1 + hmax(instance.graph)


def ga_solve(
    instance: ProblemInstance,
    cfg: GaConfig = GaConfig(),
    timeout: float = DEFAULT_TIMEOUT,
    *,
    memory_limit_bytes: int | None = None,
    on_generation=None,
) -> OptResult:
    """Evolve partitions for cfg.generations and return the best feasible one.

    Selection is a size-``tournament_size`` tournament, crossover is uniform,
    mutation flips each bit independently, and the ``elite_count`` best
    individuals survive unchanged, so the population's best fitness never
    worsens. The initial population seeds one all-software and one
    all-hardware individual (the latter is feasible for every non-negative
    budget) before filling the rest uniformly at random.

    ``on_generation`` is called as on_generation(index, best_fitness) after
    each generation's evaluation. On timeout the best feasible individual
    seen so far is returned with TIMEOUT status.
    """
    cfg = cfg.validated()
    graph = instance.graph
    n = graph.node_count
    s0 = instance.s0
    start = time.monotonic()
    deadline = start + timeout

    weight = cfg.penalty_weight if cfg.penalty_weight is not None else default_penalty_weight(instance)
    mrate = cfg.mutation_rate if cfg.mutation_rate is not None else 1.0 / n
    pop_size = cfg.population_size
    slots = pop_size - cfg.elite_count

    h = np.asarray(graph.hw_costs, dtype=np.int64)
    s = np.asarray(graph.sw_costs, dtype=np.int64)
    eu = np.asarray([u for u, _, _ in graph.edges], dtype=np.intp)
    ev = np.asarray([v for _, v, _ in graph.edges], dtype=np.intp)
    ec = np.asarray([c for _, _, c in graph.edges], dtype=np.int64)
    # int64 is plenty for realistic costs; absurd ones fall back to exact
    # Python integers.
    vector_ok = weight * (sum(graph.sw_costs) + sum(c for _, _, c in graph.edges)) + sum(
        graph.hw_costs
    ) < 2**62

    rng = np.random.default_rng(cfg.seed)
    pop = rng.integers(0, 2, size=(pop_size, n), dtype=np.uint8)
    pop[0, :] = 0
    pop[1, :] = 1

    def evaluate_pop(population):
        if vector_ok:
            hp = population @ h
            sp = (1 - population.astype(np.int64)) @ s
            if ec.size:
                cut = population[:, eu] != population[:, ev]
                sp = sp + cut @ ec
            fit = hp + weight * np.maximum(sp - s0, 0)
            return fit, hp, sp
        rows = [tuple(bool(x) for x in row) for row in population]
        reports = [evaluate(instance, row) for row in rows]
        hp = np.array([r.hp for r in reports], dtype=object)
        sp = np.array([r.sp for r in reports], dtype=object)
        fit = np.array(
            [r.hp + weight * max(0, r.sp - s0) for r in reports], dtype=object
        )
        return fit, hp, sp

    best_hp: int | None = None
    best_sp = 0
    best_bits: Partition | None = None
    evaluations = 0
    stopped: SolveStatus | None = None

    for gen in range(cfg.generations):
        if time.monotonic() > deadline:
            stopped = SolveStatus.TIMEOUT
            break
        if memory_exceeded(memory_limit_bytes):
            stopped = SolveStatus.MEMORY_OUT
            break
        fit, hp, sp = evaluate_pop(pop)
        evaluations += pop_size
        feas = sp <= s0
        if feas.any():
            rows = np.flatnonzero(feas)
            local = rows[np.argmin(hp[rows])]
            if best_hp is None or hp[local] < best_hp:
                best_hp = int(hp[local])
                best_sp = int(sp[local])
                best_bits = tuple(bool(x) for x in pop[local])
        if on_generation is not None:
            on_generation(gen, int(fit.min()))

        order = np.argsort(fit, kind="stable")
        elites = pop[order[: cfg.elite_count]].copy()
        # All draws for the generation happen here, in a fixed order, so the
        # trajectory depends only on the seed.
        cand_a = rng.integers(0, pop_size, size=(slots, cfg.tournament_size))
        cand_b = rng.integers(0, pop_size, size=(slots, cfg.tournament_size))
        do_cx = rng.random(slots) < cfg.crossover_rate
        from_b = rng.integers(0, 2, size=(slots, n), dtype=np.uint8).astype(bool)
        mutate = rng.random((slots, n)) < mrate

        if vector_ok:
            fit_idx = fit
        else:
            # Ranks preserve the selection order without squeezing huge
            # Python integers back into int64.
            fit_idx = np.empty(pop_size, dtype=np.int64)
            fit_idx[order] = np.arange(pop_size)
        wins_a = cand_a[np.arange(slots), np.argmin(fit_idx[cand_a], axis=1)]
        wins_b = cand_b[np.arange(slots), np.argmin(fit_idx[cand_b], axis=1)]
        children = np.where(from_b & do_cx[:, None], pop[wins_b], pop[wins_a])
        children[mutate] ^= 1
        pop = np.vstack([elites, children])

    elapsed = time.monotonic() - start
    status = stopped if stopped is not None else SolveStatus.SOLVED
    if best_bits is None:
        if stopped is None:
            status = SolveStatus.INFEASIBLE
        return OptResult(status=status, strategy="ga", probes=evaluations, elapsed=elapsed)
    return OptResult(
        status=status,
        strategy="ga",
        optimum_hp=best_hp,
        witness=best_bits,
        sp_at_witness=best_sp,
        probes=evaluations,
        elapsed=elapsed,
    )
