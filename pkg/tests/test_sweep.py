import math
import random

import pytest

from partopt import (
    ConfigError,
    ProblemInstance,
    SolveStatus,
    SweepConfig,
    TaskGraph,
    VIOLATION_NOT_FOUND,
    all_software,
    evaluate,
    hmax,
    sweep_binary,
    sweep_parallel,
    sweep_sequential,
)
from conftest import make_instance, random_suite

THREADED = {"executor": "thread"}


def _answer(result):
    return (result.status, result.optimum_hp, result.sp_at_witness)


class TestSequential:
    def test_two_node_optimum(self, two_node):
        result = sweep_sequential(two_node)
        assert result.status is SolveStatus.SOLVED
        assert result.optimum_hp == 7
        assert result.witness == (True, True)

    def test_generous_budget_solves_at_zero(self):
        inst = ProblemInstance(TaskGraph(3, (5, 6, 7), (1, 2, 3)), 50)
        result = sweep_sequential(inst)
        assert result.optimum_hp == 0
        assert result.witness == all_software(3)

    def test_range_capped_below_optimum_is_infeasible(self, two_node):
        # All-hardware is always feasible, so the infeasible branch needs a
        # cap below the true optimum; one step higher solves again.
        top = hmax(two_node.graph)
        short = sweep_sequential(two_node, SweepConfig(h_max=top - 1))
        assert short.status is SolveStatus.INFEASIBLE
        assert short.message == VIOLATION_NOT_FOUND
        full = sweep_sequential(two_node, SweepConfig(h_max=top))
        assert full.status is SolveStatus.SOLVED
        assert full.optimum_hp == top

    def test_probe_accounting(self, two_node):
        result = sweep_sequential(two_node)
        assert result.probes == result.optimum_hp - 0 + 1
        offset = sweep_sequential(two_node, SweepConfig(h_min=5))
        assert offset.probes == offset.optimum_hp - 5 + 1

    def test_timeout_reports_partial_probes(self):
        inst = make_instance(77, n_lo=14, n_hi=16)
        result = sweep_sequential(inst, SweepConfig(timeout=1e-9))
        assert result.status is SolveStatus.TIMEOUT
        assert result.probes >= 1

    def test_memory_guard(self, two_node):
        result = sweep_sequential(two_node, SweepConfig(memory_limit_bytes=1))
        assert result.status is SolveStatus.MEMORY_OUT


class TestParallel:
    def test_single_worker_matches_sequential(self, small_suite):
        for inst in small_suite[:8]:
            seq = sweep_sequential(inst)
            par = sweep_parallel(inst, SweepConfig(workers=1, **THREADED))
            assert _answer(par) == _answer(seq)
            assert par.witness == seq.witness
            assert par.probes == seq.probes
            assert par.message == seq.message

    def test_two_node_batches_of_four(self, two_node):
        result = sweep_parallel(two_node, SweepConfig(workers=4, **THREADED))
        assert result.optimum_hp == 7
        # batch {0..3} all infeasible, batch {4..7} answers at its minimum
        # feasible member, so every threshold was probed exactly once
        assert result.probes == 8

    def test_agreement_across_worker_counts(self, small_suite):
        for inst in small_suite[:12]:
            seq = sweep_sequential(inst)
            for workers in (2, 4, 8):
                par = sweep_parallel(inst, SweepConfig(workers=workers, **THREADED))
                assert _answer(par) == _answer(seq)
                rep = evaluate(inst, par.witness)
                assert rep.feasible and rep.hp == par.optimum_hp

    def test_batch_order_independence_under_delays(self, two_node):
        rng = random.Random(99)
        for _ in range(20):
            delays = {k: rng.uniform(0.0, 0.01) for k in range(8)}
            result = sweep_parallel(
                two_node, SweepConfig(workers=4, probe_delays=delays, **THREADED)
            )
            assert result.optimum_hp == 7

    def test_cancellation_disabled_still_correct(self, two_node):
        result = sweep_parallel(
            two_node, SweepConfig(workers=4, cancellation_on_hit=False, **THREADED)
        )
        assert result.optimum_hp == 7

    def test_infeasible_range_reports_violation_not_found(self, two_node):
        result = sweep_parallel(two_node, SweepConfig(h_max=6, workers=4, **THREADED))
        assert result.status is SolveStatus.INFEASIBLE
        assert result.message == VIOLATION_NOT_FOUND

    def test_process_executor_agrees(self, two_node):
        result = sweep_parallel(two_node, SweepConfig(workers=2, executor="process"))
        assert result.optimum_hp == 7

    def test_timeout(self):
        inst = make_instance(78, n_lo=14, n_hi=16)
        result = sweep_parallel(inst, SweepConfig(workers=2, timeout=1e-9, **THREADED))
        assert result.status is SolveStatus.TIMEOUT


class TestBinary:
    def test_two_node_probe_bound(self, two_node):
        result = sweep_binary(two_node)
        assert result.optimum_hp == 7
        assert result.probes <= math.ceil(math.log2(hmax(two_node.graph) + 1)) + 1

    def test_feasible_at_lower_boundary(self):
        inst = ProblemInstance(TaskGraph(2, (4, 4), (1, 1)), 10)
        result = sweep_binary(inst, SweepConfig(h_min=0))
        assert result.optimum_hp == 0

    def test_agreement_with_sequential(self, small_suite):
        for inst in small_suite:
            seq = sweep_sequential(inst)
            binary = sweep_binary(inst)
            assert _answer(binary) == _answer(seq)
            lo, hi = 0, hmax(inst.graph)
            assert binary.probes <= math.ceil(math.log2(hi - lo + 1)) + 1

    def test_single_point_range(self, two_node):
        result = sweep_binary(two_node, SweepConfig(h_min=7, h_max=7))
        assert result.optimum_hp == 7
        assert result.probes == 1


class TestStrategyAgreement:
    def test_all_sweeps_agree_on_random_suite(self):
        for inst in random_suite(15, base_seed=61_000, n_hi=14):
            seq = sweep_sequential(inst)
            results = [
                sweep_parallel(inst, SweepConfig(workers=4, **THREADED)),
                sweep_binary(inst),
            ]
            for result in results:
                assert _answer(result) == _answer(seq)
                if result.status is SolveStatus.SOLVED:
                    rep = evaluate(inst, result.witness)
                    assert rep.feasible

    def test_all_hardware_safety_net(self):
        for inst in random_suite(10, base_seed=62_000, n_hi=12):
            result = sweep_sequential(inst)
            assert result.status is SolveStatus.SOLVED


class TestConfigValidation:
    def test_inverted_range(self, two_node):
        with pytest.raises(ConfigError):
            sweep_sequential(two_node, SweepConfig(h_min=5, h_max=3))

    def test_negative_h_min(self, two_node):
        with pytest.raises(ConfigError):
            sweep_sequential(two_node, SweepConfig(h_min=-1))

    def test_zero_workers(self, two_node):
        with pytest.raises(ConfigError):
            sweep_parallel(two_node, SweepConfig(workers=0))

    def test_bad_executor(self, two_node):
        with pytest.raises(ConfigError):
            sweep_parallel(two_node, SweepConfig(executor="coroutine"))

    def test_non_positive_timeout(self, two_node):
        with pytest.raises(ConfigError):
            sweep_sequential(two_node, SweepConfig(timeout=0.0))

    def test_default_timeout_is_two_hours(self):
        assert SweepConfig().timeout == 7200.0
