# -*- coding: utf-8 -*-
from __future__ import division, print_function, unicode_literals

import numpy as np
import pytest

from dper_lab.exceptions import ContractViolation
from dper_lab.harness.aggregate import (
    AblationReport,
    AggregatedCurve,
    aggregate,
    aggregate_all,
    best_k,
    half_std,
    linear_fit,
    trailing_mean,
)
from dper_lab.harness.training import EvalRecord, RunLog


def make_log(returns, strategy="er", seed=0, k=None, steps=None, failed=False, wall_time=1.0):
    run_log = RunLog(strategy, "pendulum", seed, k)
    steps = steps or [100 * (i + 1) for i in range(len(returns))]
    for step, value in zip(steps, returns):
        run_log.add_eval(EvalRecord(step, value, 0.0, seed))
    run_log.failed = failed
    run_log.wall_time = wall_time
    return run_log


class TestTrailingMean(object):
    def test_values(self):
        assert np.allclose(trailing_mean([1, 2, 3, 4, 5], 2), [1, 1.5, 2.5, 3.5, 4.5])

    def test_window_one(self):
        assert np.array_equal(trailing_mean([3.0, 1.0, 2.0], 1), [3.0, 1.0, 2.0])

    def test_window_longer_than_series(self):
        assert np.allclose(trailing_mean([2.0, 4.0, 6.0], 10), [2.0, 3.0, 4.0])

    def test_empty(self):
        assert trailing_mean([], 3).size == 0

    def test_invalid_window(self):
        with pytest.raises(ContractViolation):
            trailing_mean([1.0], 0)


class TestHalfStd(object):
    def test_two_seeds(self):
        assert half_std([[0.0, 1.0], [2.0, 1.0]]) == pytest.approx([np.sqrt(2) / 2, 0.0])

    def test_single_seed(self):
        assert np.array_equal(half_std([[5.0, 6.0]]), [0.0, 0.0])


class TestLinearFit(object):
    def test_exact_line(self):
        slope, intercept, r_squared = linear_fit([2, 3, 4, 5], [5.0, 7.0, 9.0, 11.0])

        assert slope == pytest.approx(2.0)
        assert intercept == pytest.approx(1.0)
        assert r_squared == pytest.approx(1.0)

    def test_degenerate(self):
        with pytest.raises(ContractViolation):
            linear_fit([3, 3], [1.0, 2.0])


class TestAggregate(object):
    def test_two_seeds(self):
        curve = aggregate([make_log([0.0, 0.0], seed=0), make_log([2.0, 2.0], seed=1)], 1)

        assert list(curve.steps) == [100, 200]
        assert np.allclose(curve.mean, [1.0, 1.0])
        assert np.allclose(curve.half_std, [np.sqrt(2) / 2] * 2)
        assert curve.key == ("pendulum", "er", 0)
        assert curve.seeds == [0, 1]

    def test_smoothing(self):
        curve = aggregate([make_log([1.0, 3.0, 5.0])], 2)

        assert np.allclose(curve.smoothed_mean, [1.0, 2.0, 4.0])
        assert curve.final_mean == pytest.approx(4.0)
        assert curve.final_half_std == 0.0
        assert curve.smoothed_seed_finals() == [pytest.approx(4.0)]

    def test_failed_runs_excluded(self):
        curve = aggregate(
            [make_log([1.0, 1.0], seed=0), make_log([9.0], seed=1, failed=True)], 1
        )

        assert curve.seeds == [0]
        assert curve.failed_seeds == [1]
        assert np.allclose(curve.mean, [1.0, 1.0])

    def test_all_failed(self):
        curve = aggregate([make_log([1.0], failed=True)], 5)

        assert curve.final_mean is None
        assert curve.returns.shape == (0, 0)

    def test_mismatched_schedules(self):
        with pytest.raises(ContractViolation):
            aggregate([make_log([1.0, 2.0]), make_log([1.0, 2.0], seed=1, steps=[100, 300])], 1)

    def test_mixed_groups(self):
        with pytest.raises(ContractViolation):
            aggregate([make_log([1.0]), make_log([1.0], strategy="per")], 1)

    def test_empty(self):
        with pytest.raises(ContractViolation):
            aggregate([], 1)

    def test_aggregate_all_sorted(self):
        curves = aggregate_all(
            [
                make_log([1.0], strategy="per"),
                make_log([1.0], strategy="dper", k=3),
                make_log([1.0], strategy="dper", k=2),
                make_log([1.0], strategy="er"),
            ],
            1,
        )

        assert [c.key for c in curves] == [
            ("pendulum", "dper", 2),
            ("pendulum", "dper", 3),
            ("pendulum", "er", 0),
            ("pendulum", "per", 0),
        ]


class TestBestK(object):
    def test_best(self):
        curves = [
            AggregatedCurve("pendulum", "dper", 2, [1], [[1.0]], 1, [0]),
            AggregatedCurve("pendulum", "dper", 3, [1], [[3.0]], 1, [0]),
            AggregatedCurve("pendulum", "er", None, [1], [[9.0]], 1, [0]),
        ]

        assert best_k(curves) == {"pendulum": 3}

    def test_tie_goes_to_smaller_k(self):
        curves = [
            AggregatedCurve("pendulum", "dper", 2, [1], [[1.0]], 1, [0]),
            AggregatedCurve("pendulum", "dper", 4, [1], [[1.0]], 1, [0]),
        ]

        assert best_k(curves) == {"pendulum": 2}


class TestAblationReport(object):
    def test_report(self):
        report = AblationReport(
            {
                3: [make_log([2.0], "dper", 0, k=3, wall_time=7.0)],
                2: [
                    make_log([1.0], "dper", 0, k=2, wall_time=5.0),
                    make_log([1.0], "dper", 1, k=2, wall_time=5.0),
                ],
            },
            window=1,
        )

        assert list(report.logs_by_k) == [2, 3]
        assert len(report.logs) == 3
        assert report.timing == [(2, 2, 5.0, 0.0), (3, 1, 7.0, 0.0)]
        assert report.fit[0] == pytest.approx(2.0)
        assert report.fit[1] == pytest.approx(1.0)
        assert report.best_k == {"pendulum": 3}

    def test_single_k_has_no_fit(self):
        report = AblationReport({2: [make_log([1.0], "dper", 0, k=2)]}, window=1)

        assert report.fit is None
