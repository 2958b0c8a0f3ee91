# -*- coding: utf-8 -*-
from __future__ import absolute_import, print_function, unicode_literals

from .aggregate import AblationReport, AggregatedCurve, aggregate  # noqa
from .config import ExperimentConfig, ExperimentConfigForm  # noqa
from .experiments import run_ablation_k, run_experiment  # noqa
from .outputs import read_evals, write_outputs  # noqa
from .training import EvalRecord, RunLog, evaluate, run_training  # noqa
