# -*- coding: utf-8 -*-
"""
Reducing per-seed run logs to curves and summary numbers.
"""
from __future__ import absolute_import, division, print_function, unicode_literals
from collections import OrderedDict

import numpy as np
from cached_property import cached_property

from ..exceptions import ContractViolation


def trailing_mean(values, window):
    """
    Trailing moving average.

    Position ``i`` averages ``values[max(0, i - window + 1) : i + 1]`` so
    the first ``window - 1`` positions average everything seen so far
    and a window longer than the series averages the whole prefix.
    """
    if window < 1:
        raise ContractViolation("Smoothing window must be positive.")
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        return values.copy()
    sums = np.concatenate([[0.0], np.cumsum(values)])
    ends = np.arange(1, values.size + 1)
    starts = np.maximum(ends - window, 0)
    return (sums[ends] - sums[starts]) / (ends - starts)


def half_std(returns):
    """
    Half of the across-seed sample standard deviation per column
    (``ddof=1``); zero for a single seed.
    """
    returns = np.asarray(returns, dtype=np.float64)
    if returns.shape[0] < 2:
        return np.zeros(returns.shape[1:])
    return 0.5 * returns.std(axis=0, ddof=1)


def linear_fit(x, y):
    """
    Least-squares line through ``(x, y)``.

    Returns
    -------
    tuple
        ``(slope, intercept, r_squared)``
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size < 2 or np.all(x == x[0]):
        raise ContractViolation("A line needs at least two distinct x values.")
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    ss_res = float(residual.dot(residual))
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else float(ss_res == 0)
    return float(slope), float(intercept), r_squared


class AggregatedCurve(object):
    """
    Across-seed learning curve of one ``(env, strategy, K)`` group.

    Failed runs are counted but left out of the curve.

    Attributes
    ----------
    steps : ndarray
        Shared evaluation schedule
    mean, half_std : ndarray
        Raw across-seed statistics per step
    smoothed_mean, smoothed_half_std : ndarray
        The same after trailing smoothing over ``window`` records
    """

    def __init__(self, env, strategy, k, steps, returns, window, seeds, failed_seeds=()):
        self.env = env
        self.strategy = strategy
        self.k = k
        self.steps = np.asarray(steps, dtype=np.int64)
        self.returns = np.asarray(returns, dtype=np.float64)
        if self.returns.size == 0:
            self.returns = np.zeros((0, self.steps.size))
        self.window = window
        self.seeds = list(seeds)
        self.failed_seeds = list(failed_seeds)

        self.mean = (
            self.returns.mean(axis=0) if self.returns.shape[0] else np.zeros(self.steps.size)
        )
        self.half_std = half_std(self.returns)
        self.smoothed_mean = trailing_mean(self.mean, window)
        self.smoothed_half_std = trailing_mean(self.half_std, window)

    def __repr__(self):
        return "<AggregatedCurve {} {} k={} seeds={} final={}>".format(
            self.env, self.strategy, self.k, len(self.seeds), self.final_mean
        )

    @property
    def key(self):
        return (self.env, self.strategy, self.k or 0)

    @property
    def final_mean(self):
        return float(self.smoothed_mean[-1]) if self.smoothed_mean.size else None

    @property
    def final_half_std(self):
        return (
            float(self.smoothed_half_std[-1]) if self.smoothed_half_std.size else None
        )

    def smoothed_seed_finals(self):
        """
        Final smoothed return of every successful seed on its own.
        """
        return [float(trailing_mean(r, self.window)[-1]) for r in self.returns]


def aggregate(logs, window):
    """
    Reduce the logs of one group to an :class:`AggregatedCurve`.

    Raises
    ------
    ContractViolation
        When logs belong to different groups or successful runs do not
        share one evaluation schedule
    """
    logs = list(logs)
    if not logs:
        raise ContractViolation("Nothing to aggregate.")
    keys = {l.key for l in logs}
    if len(keys) > 1:
        raise ContractViolation(
            "Cannot aggregate logs of different groups: {}".format(sorted(keys))
        )
    env, strategy, k = logs[0].key

    good = [l for l in logs if not l.failed]
    steps = good[0].eval_steps if good else []
    for l in good[1:]:
        if l.eval_steps != steps:
            raise ContractViolation(
                "Seed {} was evaluated at different steps than seed {}.".format(
                    l.seed, good[0].seed
                ),
                {"seed": l.seed},
            )

    returns = [[r.mean_return for r in l.evals] for l in good]
    return AggregatedCurve(
        env,
        strategy,
        k or None,
        steps,
        returns,
        window,
        seeds=[l.seed for l in good],
        failed_seeds=[l.seed for l in logs if l.failed],
    )


def group_logs(logs):
    """
    Logs grouped by ``(env, strategy, K)`` in sorted key order.
    """
    groups = OrderedDict()
    for l in sorted(logs, key=lambda l: l.key):
        groups.setdefault(l.key, []).append(l)
    return groups


def aggregate_all(logs, window):
    return [aggregate(group, window) for group in group_logs(logs).values()]


def best_k(curves):
    """
    ``{env: K}`` with the highest final smoothed mean among curves that have a ``K``.
    Ties go to the smaller ``K``.
    """
    best = {}
    for curve in curves:
        if not curve.k or curve.final_mean is None:
            continue
        current = best.get(curve.env)
        if current is None or curve.final_mean > current.final_mean:
            best[curve.env] = curve
    return {env: curve.k for env, curve in best.items()}


class AblationReport(object):
    """
    Results of a ``K`` sweep.

    Parameters
    ----------
    logs_by_k : OrderedDict
        ``{K: [RunLog, ...]}``
    window : int
        Smoothing window of the curves
    """

    def __init__(self, logs_by_k, window):
        self.logs_by_k = OrderedDict(sorted(logs_by_k.items()))
        self.window = window

    def __repr__(self):
        return "<AblationReport K={}>".format(list(self.logs_by_k))

    @property
    def logs(self):
        return [l for logs in self.logs_by_k.values() for l in logs]

    @cached_property
    def curves(self):
        return aggregate_all(self.logs, self.window)

    @cached_property
    def timing(self):
        """
        ``(K, runs, mean wall time, std wall time)`` rows over successful runs.
        """
        rows = []
        for k, logs in self.logs_by_k.items():
            times = np.array([l.wall_time for l in logs if not l.failed])
            rows.append(
                (
                    k,
                    int(times.size),
                    float(times.mean()) if times.size else float("nan"),
                    float(times.std(ddof=1)) if times.size > 1 else 0.0,
                )
            )
        return rows

    @cached_property
    def fit(self):
        """
        ``(slope, intercept, r_squared)`` of wall time against ``K``
        over every successful run, or ``None`` with fewer than two ``K``.
        """
        points = [
            (k, l.wall_time)
            for k, logs in self.logs_by_k.items()
            for l in logs
            if not l.failed
        ]
        if len({k for k, _ in points}) < 2:
            return None
        ks, times = zip(*points)
        return linear_fit(ks, times)

    @cached_property
    def best_k(self):
        return best_k(self.curves)
