# -*- coding: utf-8 -*-
from __future__ import print_function, unicode_literals

import pytest

from dper_lab.harness import ExperimentConfig


TINY = {
    "env": "pendulum",
    "strategy": "dper",
    "seeds": 1,
    "steps": 60,
    "warmup": 20,
    "capacity": 200,
    "batch": 8,
    "hidden": 8,
    "eval_interval": 20,
    "eval_episodes": 1,
    "checkpoints": False,
}


@pytest.fixture
def tiny_config():
    def build(**changes):
        return ExperimentConfig.from_data(TINY, changes)

    return build
