# -*- coding: utf-8 -*-
"""
Multi-seed experiments and the ``K`` sweep.

Every ``(strategy, K, seed)`` run is an independent job. Jobs run in
a process pool when more than one worker is allowed; results always come
back in job order.
"""
from __future__ import absolute_import, print_function, unicode_literals
import logging
import os
from collections import OrderedDict, namedtuple
from concurrent.futures import ProcessPoolExecutor

from ..exceptions import ContractViolation
from .aggregate import AblationReport
from .outputs import write_ablation_outputs, write_outputs
from .training import run_training


log = logging.getLogger(__name__)

Job = namedtuple("Job", ["strategy", "k", "seed"])


def plan_jobs(config):
    """
    All jobs of an experiment, strategies outermost.
    """
    return [
        Job(strategy, config.k_for(strategy), seed)
        for strategy in config.strategies
        for seed in config.seeds
    ]


def checkpoint_path(config, job):
    if not config.out or not config.checkpoints:
        return None
    return os.path.join(
        config.out,
        "checkpoints",
        "{}-k{}-seed{}.ckpt".format(job.strategy.value, job.k or 0, job.seed),
    )


def run_job(config, job):
    return run_training(
        config, job.seed, strategy=job.strategy, checkpoint_path=checkpoint_path(config, job)
    )


def run_experiment(config, executor_class=ProcessPoolExecutor, write=True):
    """
    Run every job of ``config`` and, when ``config.out`` is set,
    write all result files there.

    ``timing_exclusive`` forces one job at a time regardless of ``workers``.

    Returns
    -------
    list
        :class:`.RunLog` per job in :func:`plan_jobs` order
    """
    jobs = plan_jobs(config)
    workers = 1 if config.timing_exclusive else min(config.workers, len(jobs) or 1)

    if config.out and config.checkpoints:
        os.makedirs(os.path.join(config.out, "checkpoints"), exist_ok=True)

    log.info("Running %d jobs with %d worker(s): %r", len(jobs), workers, config)
    if workers == 1:
        logs = [run_job(config, job) for job in jobs]
    else:
        with executor_class(max_workers=workers) as executor:
            futures = [executor.submit(run_job, config, job) for job in jobs]
            logs = [f.result() for f in futures]

    failed = [l for l in logs if l.failed]
    if failed:
        log.warning("%d of %d runs failed: %r", len(failed), len(logs), failed)

    if write and config.out:
        write_outputs(logs, config.out, window=config.window)
    return logs


def run_ablation_k(config, k_values, executor_class=ProcessPoolExecutor):
    """
    One full multi-seed experiment per ``K``.

    Experiments go to ``<out>/k<K>/``; the joint files
    are written to ``<out>`` itself.

    Returns
    -------
    AblationReport
    """
    if not all(s.is_decoupled for s in config.strategies):
        raise ContractViolation(
            "The K sweep only applies to dper and dper-uniform, got {}.".format(
                ", ".join(s.value for s in config.strategies)
            )
        )
    if not k_values:
        raise ContractViolation("At least one K value is required.")

    logs_by_k = OrderedDict()
    for k in k_values:
        sub_out = os.path.join(config.out, "k{}".format(k)) if config.out else ""
        sub_config = config.replace(k=k, out=sub_out)
        log.info("K sweep: running K=%d", k)
        logs_by_k[k] = run_experiment(sub_config, executor_class=executor_class)

    report = AblationReport(logs_by_k, window=config.window)
    if config.out:
        write_ablation_outputs(report, config.out)
    return report
