# -*- coding: utf-8 -*-
"""
Command-line entry point::

    dper-lab train --env pendulum --strategy er,per,dper --seeds 10 --out runs/cmp
    dper-lab ablate-k --k-values 2,3,4,5 --out runs/k
    dper-lab report --in runs/cmp
    dper-lab evaluate --checkpoint runs/cmp/checkpoints/dper-k2-seed0.ckpt
"""
from __future__ import absolute_import, print_function, unicode_literals
import argparse
import json
import logging
import os
import sys
from collections import OrderedDict

from django import forms

from ..constants import EnvName, KlMode, PrioritySource
from ..envs import get_env
from ..exceptions import ConfigError, DperLabError
from ..fields import MultipleValuesField
from ..td3_agent import Td3Agent
from ..utils import setup_django
from .aggregate import AblationReport, aggregate_all
from .config import DEFAULTS, ExperimentConfig
from .experiments import run_ablation_k, run_experiment
from .outputs import (
    TIMING_FILE,
    read_ablation,
    read_run_logs,
    read_window,
    write_ablation_report,
    write_report,
)
from .training import evaluate


log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_ERROR = 2

K_VALUES_FIELD = MultipleValuesField(
    child=forms.IntegerField(min_value=1), unique=True
)

EXPERIMENT_FLAGS = [
    ("--env", dict(choices=[e.value for e in EnvName])),
    ("--strategy", dict(help="one strategy or a comma list of er, per, dper, dper-uniform")),
    ("--k", dict(type=int, help="candidate actor batches (dper strategies only)")),
    ("--seeds", dict(help="seed count N (seeds 0..N-1) or a comma list")),
    ("--steps", dict(type=int)),
    ("--warmup", dict(type=int)),
    ("--capacity", dict(type=int)),
    ("--alpha", dict(type=float)),
    ("--priority-eps", dict(type=float)),
    ("--kl-mode", dict(choices=[m.value for m in KlMode])),
    ("--jitter", dict(type=float)),
    ("--batch", dict(type=int)),
    ("--policy-delay", dict(type=int)),
    ("--tau", dict(type=float)),
    ("--gamma", dict(type=float)),
    ("--sigma-smooth", dict(type=float)),
    ("--smooth-clip", dict(type=float)),
    ("--sigma-explore", dict(type=float)),
    ("--priority-source", dict(choices=[p.value for p in PrioritySource])),
    ("--eval-interval", dict(type=int)),
    ("--eval-episodes", dict(type=int)),
    ("--window", dict(type=int)),
    ("--hidden", dict(type=int)),
    ("--lr-actor", dict(type=float)),
    ("--lr-critic", dict(type=float)),
    ("--workers", dict(type=int)),
    ("--out", dict()),
]


def add_experiment_flags(parser):
    parser.add_argument("--config", help="YAML file with configuration values")
    for flag, kwargs in EXPERIMENT_FLAGS:
        parser.add_argument(flag, default=None, **kwargs)
    parser.add_argument(
        "--timing-exclusive",
        action="store_const",
        const=True,
        default=None,
        help="run one job at a time for clean timings",
    )
    parser.add_argument(
        "--no-checkpoints",
        dest="checkpoints",
        action="store_const",
        const=False,
        default=None,
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dper-lab",
        description="TD3 with uniform, prioritized and decoupled prioritized replay.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command")
    commands.required = True

    train = commands.add_parser("train", help="multi-seed training runs")
    add_experiment_flags(train)

    ablate = commands.add_parser("ablate-k", help="sweep the candidate count K")
    add_experiment_flags(ablate)
    ablate.add_argument("--k-values", default="2,3,4,5")

    report = commands.add_parser("report", help="rebuild summaries from result files")
    report.add_argument("--in", dest="directory", required=True)
    report.add_argument("--window", type=int, default=None)

    evaluate_parser = commands.add_parser("evaluate", help="evaluate a saved actor")
    evaluate_parser.add_argument("--checkpoint", required=True)
    evaluate_parser.add_argument(
        "--env", default=EnvName.pendulum.value, choices=[e.value for e in EnvName]
    )
    evaluate_parser.add_argument("--episodes", type=int, default=10)
    evaluate_parser.add_argument("--seed", type=int, default=0)
    return parser


def load_config(args):
    flags = {
        name: getattr(args, name)
        for name in [f[0][2:].replace("-", "_") for f in EXPERIMENT_FLAGS]
        + ["timing_exclusive", "checkpoints"]
    }
    if args.config:
        return ExperimentConfig.from_file(args.config, flags)
    return ExperimentConfig.from_data(flags)


def train_command(args):
    config = load_config(args)
    logs = run_experiment(config)
    return {
        "runs": len(logs),
        "failed": sum(1 for l in logs if l.failed),
        "out": config.out or None,
    }


def ablate_command(args):
    config = load_config(args)
    try:
        k_values = K_VALUES_FIELD.clean(args.k_values)
    except forms.ValidationError as e:
        raise ConfigError({"k_values": list(e.messages)})
    report = run_ablation_k(config, k_values)
    result = {"k_values": k_values, "best_k": report.best_k, "out": config.out or None}
    if report.fit is not None:
        result["slope"], result["intercept"], result["r_squared"] = report.fit
    return result


def report_window(args, directories):
    """
    ``--window`` when given, else the first window recorded in one of
    ``directories``, else the default.
    """
    if args.window:
        return args.window
    for directory in directories:
        window = read_window(directory)
        if window:
            return window
    return DEFAULTS["window"]


def report_command(args):
    directory = args.directory
    if os.path.exists(os.path.join(directory, TIMING_FILE)):
        logs = read_run_logs(directory)
        window = report_window(args, [directory])
        write_report(logs, directory, window)
        return {"runs": len(logs), "groups": len(aggregate_all(logs, window))}

    logs_by_k = read_ablation(directory)
    if not logs_by_k:
        raise ConfigError(
            {"in": ["{} holds neither {} nor k<K>/ directories.".format(directory, TIMING_FILE)]}
        )
    k_directories = OrderedDict(
        (k, os.path.join(directory, "k{}".format(k))) for k in logs_by_k
    )
    window = report_window(args, [directory] + list(k_directories.values()))
    report = AblationReport(logs_by_k, window=window)
    for k, logs in logs_by_k.items():
        write_report(logs, k_directories[k], window)
    write_ablation_report(report, directory)
    return {"k_values": list(logs_by_k), "best_k": report.best_k}


def evaluate_command(args):
    agent = Td3Agent.load(args.checkpoint)
    env = get_env(args.env)
    mean, std = evaluate(agent.nets.actor, env, args.episodes, args.seed)
    return {"mean_return": mean, "std_return": std}


COMMANDS = {
    "train": train_command,
    "ablate-k": ablate_command,
    "report": report_command,
    "evaluate": evaluate_command,
}


def error_line(error, details=None):
    return json.dumps(
        {
            "error": error.__class__.__name__,
            "message": str(error),
            "details": details if details is not None else {},
        },
        sort_keys=True,
        default=str,
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    setup_django()

    try:
        result = COMMANDS[args.command](args)
    except DperLabError as e:
        sys.stderr.write(error_line(e, e.details) + "\n")
        return EXIT_ERROR
    except Exception as e:
        log.debug("Unexpected failure", exc_info=True)
        sys.stderr.write(error_line(e) + "\n")
        return EXIT_UNEXPECTED

    sys.stdout.write(json.dumps(result, sort_keys=True, default=str) + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
