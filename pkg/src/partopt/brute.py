"""Exhaustive enumeration: the referee every other strategy is checked against.

All 2^n partitions are scored in vectorized chunks. Assignments are encoded
as integers with node 0 in the most significant bit, so ascending codes are
exactly lexicographic order on assignment vectors (software < hardware);
ties on the optimal hardware cost are broken toward the smallest code, which
pins the reported witness uniquely.
"""

from __future__ import annotations

import time

import numpy as np

from .errors import NodeLimitError
from .graph import Partition, ProblemInstance
from .limits import memory_exceeded
from .result import DEFAULT_TIMEOUT, OptResult, SolveStatus

DEFAULT_NODE_LIMIT = 26

_CHUNK = 1 << 16


def _decode(code: int, n: int) -> Partition:
    return tuple(bool((code >> (n - 1 - i)) & 1) for i in range(n))


def _check_size(instance: ProblemInstance, node_limit: int) -> int:
    n = instance.graph.node_count
    if n > node_limit:
        raise NodeLimitError(
            f"instance has {n} nodes; enumeration is limited to {node_limit} "
            f"(raise node_limit to force it)"
        )
    return n


def _chunk_costs(graph, codes: np.ndarray):
    n = graph.node_count
    shifts = (n - 1 - np.arange(n)).astype(np.int64)
    bits = ((codes[:, None] >> shifts[None, :]) & 1).astype(np.int8)
    h = np.asarray(graph.hw_costs, dtype=np.int64)
    s = np.asarray(graph.sw_costs, dtype=np.int64)
    hp = bits @ h
    sp = (1 - bits.astype(np.int64)) @ s
    if graph.edges:
        eu = np.asarray([u for u, _, _ in graph.edges], dtype=np.intp)
        ev = np.asarray([v for _, v, _ in graph.edges], dtype=np.intp)
        ec = np.asarray([c for _, _, c in graph.edges], dtype=np.int64)
        sp = sp + (bits[:, eu] != bits[:, ev]) @ ec
    return hp, sp


def enumerate_partitions(
    instance: ProblemInstance,
    node_limit: int = DEFAULT_NODE_LIMIT,
    *,
    timeout: float = DEFAULT_TIMEOUT,
    memory_limit_bytes: int | None = None,
) -> OptResult:
    """Scan all 2^n partitions; exact optimum with deterministic witness.

    Refuses instances above ``node_limit`` nodes. Reports exactly 2^n probes.
    """
    n = _check_size(instance, node_limit)
    graph = instance.graph
    s0 = instance.s0
    start = time.monotonic()
    deadline = start + timeout

    best_hp: int | None = None
    best_sp = 0
    best_code = 0
    probes = 0
    total = 1 << n
    for base in range(0, total, _CHUNK):
        if time.monotonic() > deadline:
            return _result(SolveStatus.TIMEOUT, instance, best_hp, best_sp, best_code, n, probes, start)
        if memory_exceeded(memory_limit_bytes):
            return _result(SolveStatus.MEMORY_OUT, instance, best_hp, best_sp, best_code, n, probes, start)
        codes = np.arange(base, min(base + _CHUNK, total), dtype=np.int64)
        hp, sp = _chunk_costs(graph, codes)
        probes += codes.shape[0]
        feas = np.flatnonzero(sp <= s0)
        if feas.size == 0:
            continue
        local = feas[np.argmin(hp[feas])]
        # argmin takes the first minimum and codes ascend, so within the
        # chunk this is already the lexicographically smallest optimum.
        if best_hp is None or hp[local] < best_hp:
            best_hp = int(hp[local])
            best_sp = int(sp[local])
            best_code = int(codes[local])
    return _result(SolveStatus.SOLVED, instance, best_hp, best_sp, best_code, n, probes, start)


def _result(status, instance, best_hp, best_sp, best_code, n, probes, start) -> OptResult:
    if best_hp is None:
        if status is SolveStatus.SOLVED:
            status = SolveStatus.INFEASIBLE
        return OptResult(status=status, strategy="brute", probes=probes, elapsed=time.monotonic() - start)
    return OptResult(
        status=status,
        strategy="brute",
        optimum_hp=best_hp,
        witness=_decode(best_code, n),
        sp_at_witness=best_sp,
        probes=probes,
        elapsed=time.monotonic() - start,
    )


def brute_feasible(
    instance: ProblemInstance,
    h_limit: int,
    node_limit: int = DEFAULT_NODE_LIMIT,
) -> bool:
    """Does any partition satisfy both S_P <= s0 and H_P <= h_limit?

    Same exhaustive scan as ``enumerate_partitions`` but short-circuits on
    the first qualifying partition.
    """
    n = _check_size(instance, node_limit)
    graph = instance.graph
    s0 = instance.s0
    total = 1 << n
    for base in range(0, total, _CHUNK):
        codes = np.arange(base, min(base + _CHUNK, total), dtype=np.int64)
        hp, sp = _chunk_costs(graph, codes)
        if bool(((sp <= s0) & (hp <= h_limit)).any()):
            return True
    return False
