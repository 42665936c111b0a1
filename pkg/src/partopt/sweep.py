"""Threshold sweeps that turn the decision oracle into an optimizer.

Feasibility is monotone in the hardware threshold: any partition that fits
under k also fits under every larger limit. The least feasible threshold is
therefore the optimum, and three probing schedules find it:

* ``sweep_sequential`` probes k = h_min, h_min+1, ... and stops at the first
  feasible verdict.
* ``sweep_parallel`` processes the same thresholds in ascending batches of N
  concurrent probes, one batch at a time. The answer of a batch is its
  smallest feasible threshold, never the first worker to finish, so the
  result is identical to the sequential scan no matter how workers are
  scheduled.
* ``sweep_binary`` bisects the threshold range, probing O(log range) times.

Workers share nothing but the immutable instance and a set-once cancellation
event; with ``cancellation_on_hit`` a feasible verdict at k cancels only the
batch members probing larger thresholds, because a smaller one may still
turn out feasible and must run to completion.
"""

from __future__ import annotations

import atexit
import multiprocessing
import threading
import time
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ConfigError
from .graph import ProblemInstance, evaluate, hmax
from .limits import deadline_passed, memory_exceeded
from .oracle import Outcome, feasible
from .result import DEFAULT_TIMEOUT, VIOLATION_NOT_FOUND, OptResult, SolveStatus


@dataclass(frozen=True)
class SweepConfig:
    """Threshold range and resource limits for a sweep.

    ``h_max=None`` means the all-hardware cost of the instance, the natural
    upper bound. ``executor`` picks the concurrency backend for
    ``sweep_parallel``: "process" gives real CPU parallelism, "thread" keeps
    everything in one process (useful for embedding and tests).
    ``probe_delays`` is a test hook mapping thresholds to an artificial sleep
    applied in the worker before probing, used to simulate adversarial
    scheduling; it has no effect on the returned optimum.
    """

    h_min: int = 0
    h_max: int | None = None
    workers: int = 1
    timeout: float = DEFAULT_TIMEOUT
    cancellation_on_hit: bool = True
    executor: str = "process"
    memory_limit_bytes: int | None = None
    probe_delays: Mapping[int, float] | None = None


def _resolve_range(instance: ProblemInstance, cfg: SweepConfig) -> tuple[int, int]:
    hi = cfg.h_max if cfg.h_max is not None else hmax(instance.graph)
    if cfg.h_min < 0:
        raise ConfigError("h_min must be non-negative")
    if hi < cfg.h_min:
        raise ConfigError(f"empty threshold range: h_min {cfg.h_min} exceeds h_max {hi}")
    if cfg.workers < 1:
        raise ConfigError("workers must be at least 1")
    if cfg.timeout <= 0:
        raise ConfigError("timeout must be positive")
    if cfg.executor not in ("process", "thread"):
        raise ConfigError(f"unknown executor {cfg.executor!r}")
    return cfg.h_min, hi


def _solved(strategy: str, instance, witness, probes, start) -> OptResult:
    rep = evaluate(instance, witness)
    return OptResult(
        status=SolveStatus.SOLVED,
        strategy=strategy,
        optimum_hp=rep.hp,
        witness=witness,
        sp_at_witness=rep.sp,
        probes=probes,
        elapsed=time.monotonic() - start,
    )


def _unsolved(strategy: str, status: SolveStatus, probes, start, message=None) -> OptResult:
    return OptResult(
        status=status,
        strategy=strategy,
        probes=probes,
        elapsed=time.monotonic() - start,
        message=message,
    )


def sweep_sequential(instance: ProblemInstance, cfg: SweepConfig = SweepConfig()) -> OptResult:
    """Linear scan k = h_min..h_max; first feasible threshold is the optimum.

    ``cfg.workers`` is ignored. Exactly one oracle call is made per probed
    threshold, so a solved run reports optimum_hp - h_min + 1 probes.
    """
    lo, hi = _resolve_range(instance, cfg)
    start = time.monotonic()
    deadline = start + cfg.timeout
    probes = 0
    for k in range(lo, hi + 1):
        if memory_exceeded(cfg.memory_limit_bytes):
            return _unsolved("sequential", SolveStatus.MEMORY_OUT, probes, start)
        verdict = feasible(instance, k, deadline=deadline)
        probes += 1
        if verdict.outcome is Outcome.TIMEOUT:
            return _unsolved("sequential", SolveStatus.TIMEOUT, probes, start)
        if verdict.is_feasible:
            return _solved("sequential", instance, verdict.witness, probes, start)
    return _unsolved("sequential", SolveStatus.INFEASIBLE, probes, start, VIOLATION_NOT_FOUND)


def _probe_task(instance, k, deadline, delay, cancel):
    """One worker probe; module-level so process pools can pickle it."""
    if delay:
        time.sleep(delay)
    return k, feasible(instance, k, deadline=deadline, cancel=cancel)


class _ThreadBackend:
    def __init__(self, workers: int):
        self.pool: Executor = ThreadPoolExecutor(max_workers=workers)

    def new_event(self):
        return threading.Event()


class _ProcessBackend:
    def __init__(self, workers: int):
        methods = multiprocessing.get_all_start_methods()
        ctx = multiprocessing.get_context("fork" if "fork" in methods else None)
        self.pool = ProcessPoolExecutor(max_workers=workers, mp_context=ctx)
        self._manager = None

    def new_event(self):
        # Manager events are picklable proxies, so they can ride inside task
        # payloads; plain multiprocessing events cannot.
        if self._manager is None:
            self._manager = multiprocessing.Manager()
        return self._manager.Event()


_BACKENDS: dict[tuple[str, int], object] = {}
_BACKENDS_LOCK = threading.Lock()


def _get_backend(kind: str, workers: int):
    # Pools are cached per (backend, size): forking a fresh pool for every
    # sweep would dominate the cost of short probes.
    key = (kind, workers)
    with _BACKENDS_LOCK:
        backend = _BACKENDS.get(key)
        if backend is None:
            backend = _ThreadBackend(workers) if kind == "thread" else _ProcessBackend(workers)
            _BACKENDS[key] = backend
        return backend


@atexit.register
def _shutdown_backends():
    with _BACKENDS_LOCK:
        for backend in _BACKENDS.values():
            backend.pool.shutdown(wait=False, cancel_futures=True)
        _BACKENDS.clear()


def sweep_parallel(instance: ProblemInstance, cfg: SweepConfig = SweepConfig()) -> OptResult:
    """Batch portfolio sweep: N concurrent probes per ascending batch.

    Batch j covers thresholds h_min + j*N .. h_min + j*N + N - 1, clipped to
    h_max. All non-cancelled members of a batch are joined before the batch
    is decided, and the decision is the smallest feasible threshold in the
    batch, which makes the optimum identical to the sequential sweep's
    regardless of completion order. With no feasible threshold anywhere in
    range the result carries the "Violation not found" report line.
    """
    lo, hi = _resolve_range(instance, cfg)
    start = time.monotonic()
    deadline = start + cfg.timeout
    delays = dict(cfg.probe_delays) if cfg.probe_delays else {}
    backend = _get_backend(cfg.executor, cfg.workers)
    probes = 0

    k = lo
    while k <= hi:
        if deadline_passed(deadline):
            return _unsolved("parallel", SolveStatus.TIMEOUT, probes, start)
        if memory_exceeded(cfg.memory_limit_bytes):
            return _unsolved("parallel", SolveStatus.MEMORY_OUT, probes, start)
        batch = range(k, min(k + cfg.workers - 1, hi) + 1)
        use_cancel = cfg.cancellation_on_hit and len(batch) > 1
        events = {kk: backend.new_event() for kk in batch} if use_cancel else {}
        futures = {
            backend.pool.submit(
                _probe_task, instance, kk, deadline, delays.get(kk), events.get(kk)
            ): kk
            for kk in batch
        }
        best_k: int | None = None
        best_witness = None
        timed_out = False
        for fut in as_completed(futures):
            kk, verdict = fut.result()
            probes += 1
            if verdict.outcome is Outcome.TIMEOUT:
                timed_out = True
                for event in events.values():
                    event.set()
            elif verdict.is_feasible and (best_k is None or kk < best_k):
                best_k, best_witness = kk, verdict.witness
                if use_cancel:
                    for kk2, event in events.items():
                        if kk2 > best_k:
                            event.set()
            # Cancelled verdicts are internal bookkeeping: the only workers
            # that receive them probe thresholds above a feasible hit.
        if timed_out:
            result = _unsolved("parallel", SolveStatus.TIMEOUT, probes, start)
            if best_witness is not None:
                rep = evaluate(instance, best_witness)
                result = OptResult(
                    status=SolveStatus.TIMEOUT,
                    strategy="parallel",
                    optimum_hp=rep.hp,
                    witness=best_witness,
                    sp_at_witness=rep.sp,
                    probes=probes,
                    elapsed=time.monotonic() - start,
                )
            return result
        if best_witness is not None:
            return _solved("parallel", instance, best_witness, probes, start)
        k = batch.stop
    return _unsolved("parallel", SolveStatus.INFEASIBLE, probes, start, VIOLATION_NOT_FOUND)


class _SweepStop(Exception):
    def __init__(self, status: SolveStatus):
        self.status = status


def sweep_binary(instance: ProblemInstance, cfg: SweepConfig = SweepConfig()) -> OptResult:
    """Bisect the threshold range for the least feasible threshold.

    Correct because feasibility is monotone in the threshold. Needs at most
    ceil(log2(h_max - h_min + 1)) + 1 oracle calls.
    """
    lo, hi = _resolve_range(instance, cfg)
    start = time.monotonic()
    deadline = start + cfg.timeout
    probes = 0
    cached = {}

    def probe(kk: int):
        nonlocal probes
        if memory_exceeded(cfg.memory_limit_bytes):
            raise _SweepStop(SolveStatus.MEMORY_OUT)
        verdict = feasible(instance, kk, deadline=deadline)
        probes += 1
        if verdict.outcome is Outcome.TIMEOUT:
            raise _SweepStop(SolveStatus.TIMEOUT)
        cached[kk] = verdict
        return verdict

    try:
        a, b = lo, hi
        while a < b:
            mid = (a + b) // 2
            if probe(mid).is_feasible:
                b = mid
            else:
                a = mid + 1
        verdict = cached.get(a)
        if verdict is None:
            verdict = probe(a)
    except _SweepStop as stop:
        return _unsolved("binary", stop.status, probes, start)
    if verdict.is_feasible:
        return _solved("binary", instance, verdict.witness, probes, start)
    return _unsolved("binary", SolveStatus.INFEASIBLE, probes, start, VIOLATION_NOT_FOUND)
