# -*- coding: utf-8 -*-
"""
Result files.

Floats are written with ``repr`` so reading a CSV back gives the exact
values that were written.
"""
from __future__ import absolute_import, print_function, unicode_literals
import csv
import io
import logging
import os
import warnings
from collections import OrderedDict

from ..constants import PHASES
from ..exceptions import OutputError
from .aggregate import aggregate_all, best_k
from .training import EvalRecord, RunLog


log = logging.getLogger(__name__)

EVALS_HEADER = ["strategy", "env", "seed", "step", "mean_return", "std_return"]
DIAG_HEADER = [
    "strategy",
    "env",
    "seed",
    "update",
    "step",
    "critic_loss1",
    "critic_loss2",
    "mean_abs_delta",
    "actor_loss",
    "chosen_eta",
    "chosen_index",
    "mu_sq_norm",
    "mean_sq_dev",
    "candidate_etas",
]
TIMING_HEADER = ["strategy", "env", "k", "seed", "wall_time"] + list(PHASES) + ["failed"]
ABLATION_HEADER = ["k"] + EVALS_HEADER
ABLATION_TIMING_HEADER = ["k", "runs", "mean_wall_time", "std_wall_time"]

EVALS_FILE = "evals.csv"
DIAG_FILE = "diag.csv"
TIMING_FILE = "timing.csv"
SUMMARY_FILE = "summary.txt"
ABLATION_FILE = "ablation.csv"
ABLATION_TIMING_FILE = "ablation_timing.csv"
WINDOW_PREFIX = "smoothing window: "


def format_value(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):
        return value.value
    return str(value)


def _env_name(env):
    return getattr(env, "value", env)


def write_csv(path, header, rows):
    try:
        with io.open(path, "w", encoding="utf-8", newline="") as fid:
            writer = csv.writer(fid, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_value(v) for v in row])
    except (IOError, OSError) as e:
        raise OutputError("Cannot write {}: {}".format(path, e), {"path": path})
    return path


def read_window(directory):
    """
    Smoothing window recorded in the ``summary.txt`` of ``directory``,
    or ``None`` when there is no summary or it does not record one.
    """
    path = os.path.join(directory, SUMMARY_FILE)
    if not os.path.exists(path):
        return None
    with io.open(path, encoding="utf-8") as fid:
        for line in fid:
            if line.startswith(WINDOW_PREFIX):
                return int(line[len(WINDOW_PREFIX) :])
    return None


def read_csv(path):
    try:
        with io.open(path, "r", encoding="utf-8", newline="") as fid:
            return list(csv.DictReader(fid))
    except (IOError, OSError) as e:
        raise OutputError("Cannot read {}: {}".format(path, e), {"path": path})


def evals_rows(logs):
    for l in logs:
        for r in l.evals:
            yield (l.strategy, _env_name(l.env), l.seed, r.step, r.mean_return, r.std_return)


def diag_rows(logs):
    for l in logs:
        for d in l.diagnostics:
            yield (
                l.strategy,
                _env_name(l.env),
                l.seed,
                d.update,
                d.step,
                d.critic_loss1,
                d.critic_loss2,
                d.mean_abs_delta,
                d.actor_loss,
                d.chosen_eta,
                d.chosen_index,
                d.mu_sq_norm,
                d.mean_sq_dev,
                ";".join(repr(float(e)) for e in d.candidate_etas),
            )


def timing_rows(logs):
    for l in logs:
        yield (
            [l.strategy, _env_name(l.env), l.k or 0, l.seed, float(l.wall_time)]
            + [float(l.phase_totals.get(p, 0.0)) for p in PHASES]
            + [int(l.failed)]
        )


def read_evals(path):
    """
    Parse ``evals.csv``.

    Returns
    -------
    OrderedDict
        ``{(strategy, env, seed): [EvalRecord, ...]}`` in file order
    """
    records = OrderedDict()
    for row in read_csv(path):
        seed = int(row["seed"])
        records.setdefault((row["strategy"], row["env"], seed), []).append(
            EvalRecord(
                int(row["step"]), float(row["mean_return"]), float(row["std_return"]), seed
            )
        )
    return records


def read_run_logs(directory):
    """
    Rebuild :class:`.RunLog` shells (evaluations and timing only)
    from the files of an experiment directory.
    """
    evals = read_evals(os.path.join(directory, EVALS_FILE))
    logs = OrderedDict()
    for row in read_csv(os.path.join(directory, TIMING_FILE)):
        seed = int(row["seed"])
        key = (row["strategy"], row["env"], seed)
        run_log = RunLog(row["strategy"], row["env"], seed, int(row["k"]) or None)
        run_log.wall_time = float(row["wall_time"])
        run_log.phase_totals = OrderedDict((p, float(row[p])) for p in PHASES)
        run_log.failed = bool(int(row["failed"]))
        run_log.evals = evals.get(key, [])
        logs[key] = run_log
    return list(logs.values())


def summary_lines(logs, curves, fit=None, window=None):
    """
    Plain-text table sorted by ``(env, strategy, K)``.
    The best ``K`` per environment is marked with ``*``.
    When given, the smoothing window closes the summary so that
    :func:`read_window` can recover it.
    """
    wall_times = {}
    for l in logs:
        if not l.failed:
            wall_times.setdefault(l.key, []).append(l.wall_time)
    winners = best_k(curves)

    row_format = "{:<10} {:<13} {:>3} {:>5} {:>6} {:>12} {:>12} {:>12}"
    lines = [
        row_format.format(
            "env", "strategy", "k", "seeds", "failed", "final_mean", "half_std", "wall_time"
        )
    ]
    for curve in sorted(curves, key=lambda c: c.key):
        times = wall_times.get(curve.key, [])
        marker = "*" if curve.k and winners.get(curve.env) == curve.k else ""
        lines.append(
            row_format.format(
                curve.env,
                curve.strategy,
                "{}{}".format(curve.k or "-", marker),
                len(curve.seeds),
                len(curve.failed_seeds),
                "-" if curve.final_mean is None else "{:.3f}".format(curve.final_mean),
                "-"
                if curve.final_half_std is None
                else "{:.3f}".format(curve.final_half_std),
                "{:.2f}".format(sum(times) / len(times)) if times else "-",
            )
        )
    if fit is not None:
        slope, intercept, r_squared = fit
        lines.append("")
        lines.append(
            "wall_time = {:.4f} * k + {:.4f} (R^2 = {:.4f})".format(
                slope, intercept, r_squared
            )
        )
    if window is not None:
        lines.append("")
        lines.append("{}{}".format(WINDOW_PREFIX, window))
    return lines


def write_summary(path, logs, curves, fit=None, window=None):
    try:
        with io.open(path, "w", encoding="utf-8") as fid:
            fid.write("\n".join(summary_lines(logs, curves, fit, window)) + "\n")
    except (IOError, OSError) as e:
        raise OutputError("Cannot write {}: {}".format(path, e), {"path": path})
    return path


def write_plots(curves, directory):
    """
    One learning-curve plot per environment with half-std bands.

    Plotting is optional: any failure is turned into a warning
    and no plot paths are returned.
    """
    if not curves:
        return []
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        paths = []
        by_env = OrderedDict()
        for curve in curves:
            by_env.setdefault(curve.env, []).append(curve)
        for env, env_curves in by_env.items():
            fig, ax = plt.subplots(figsize=(7, 4.5))
            for curve in env_curves:
                if not curve.steps.size:
                    continue
                label = curve.strategy if not curve.k else "{} K={}".format(
                    curve.strategy, curve.k
                )
                ax.plot(curve.steps, curve.smoothed_mean, label=label)
                ax.fill_between(
                    curve.steps,
                    curve.smoothed_mean - curve.smoothed_half_std,
                    curve.smoothed_mean + curve.smoothed_half_std,
                    alpha=0.2,
                )
            ax.set_xlabel("step")
            ax.set_ylabel("evaluation return")
            ax.set_title(env)
            ax.legend(loc="lower right")
            path = os.path.join(directory, "curves_{}.png".format(env))
            fig.savefig(path, dpi=100, bbox_inches="tight")
            plt.close(fig)
            paths.append(path)
        return paths
    except Exception as e:
        message = "Plotting failed, only CSV files were written: {}".format(e)
        log.warning(message)
        warnings.warn(message)
        return []


def _ensure_directory(directory):
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        raise OutputError(
            "Cannot create {}: {}".format(directory, e), {"path": directory}
        )


def write_report(logs, directory, window, plots=True, fit=None, curves=None):
    """
    Write the derived files of an experiment, ``summary.txt`` and plots,
    from runs already on disk. CSV result files are left untouched.
    """
    _ensure_directory(directory)
    logs = list(logs)
    if curves is None:
        curves = aggregate_all(logs, window)
    return {
        "summary": write_summary(
            os.path.join(directory, SUMMARY_FILE), logs, curves, fit, window
        ),
        "plots": write_plots(curves, directory) if plots else [],
    }


def write_outputs(logs, directory, window, plots=True, fit=None):
    """
    Write every result file of an experiment.

    Returns
    -------
    dict
        Paths of ``evals``, ``diag``, ``timing``, ``summary`` and ``plots``
    """
    _ensure_directory(directory)
    logs = list(logs)

    paths = {
        "evals": write_csv(os.path.join(directory, EVALS_FILE), EVALS_HEADER, evals_rows(logs)),
        "diag": write_csv(os.path.join(directory, DIAG_FILE), DIAG_HEADER, diag_rows(logs)),
        "timing": write_csv(
            os.path.join(directory, TIMING_FILE), TIMING_HEADER, timing_rows(logs)
        ),
    }
    paths.update(write_report(logs, directory, window, plots=plots, fit=fit))
    log.info("Wrote results of %d runs to %s", len(logs), directory)
    return paths


def write_ablation_outputs(report, directory, plots=True):
    """
    Write the joint files of a ``K`` sweep.
    """
    _ensure_directory(directory)
    rows = (
        (k, l.strategy, _env_name(l.env), l.seed, r.step, r.mean_return, r.std_return)
        for k, logs in report.logs_by_k.items()
        for l in logs
        for r in l.evals
    )
    paths = {
        "ablation": write_csv(os.path.join(directory, ABLATION_FILE), ABLATION_HEADER, rows),
        "ablation_timing": write_csv(
            os.path.join(directory, ABLATION_TIMING_FILE),
            ABLATION_TIMING_HEADER,
            report.timing,
        ),
    }
    paths.update(write_ablation_report(report, directory, plots=plots))
    return paths


def write_ablation_report(report, directory, plots=True):
    return write_report(
        report.logs,
        directory,
        report.window,
        plots=plots,
        fit=report.fit,
        curves=report.curves,
    )


def read_ablation(directory):
    """
    Rebuild the ``{K: [RunLog, ...]}`` mapping from ``k<K>/`` sub-directories.
    """
    logs_by_k = OrderedDict()
    for name in sorted(os.listdir(directory)):
        path = os.path.join(directory, name)
        if (
            name.startswith("k")
            and name[1:].isdigit()
            and os.path.exists(os.path.join(path, TIMING_FILE))
        ):
            logs_by_k[int(name[1:])] = read_run_logs(path)
    return OrderedDict(sorted(logs_by_k.items()))
