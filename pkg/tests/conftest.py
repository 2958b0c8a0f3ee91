# -*- coding: utf-8 -*-
from __future__ import print_function, unicode_literals

import numpy as np
import pytest

from dper_lab.constants import OutputActivation
from dper_lab.nn_core import MlpParams, Rng
from dper_lab.replay import ReplayMemory, Transition


@pytest.fixture
def rng():
    return Rng(1234)


@pytest.fixture
def tiny_critic(rng):
    return MlpParams.initialize(4, 1, rng, hidden=5, name="critic")


@pytest.fixture
def tiny_actor(rng):
    return MlpParams.initialize(
        3,
        2,
        rng,
        hidden=5,
        output_activation=OutputActivation.tanh,
        action_bound=2.0,
        name="actor",
    )


def make_transition(state_dim=3, action_dim=1, value=0.0, reward=0.0, terminal=False):
    return Transition(
        np.full(state_dim, value),
        np.full(action_dim, min(abs(value), 1.0)),
        reward,
        np.full(state_dim, value + 1.0),
        terminal=terminal,
    )


@pytest.fixture
def filled_memory():
    memory = ReplayMemory(16, 3, 1, alpha=1.0, priority_eps=0.0)
    for i in range(10):
        memory.push(make_transition(value=float(i), reward=-float(i)), priority=1.0)
    return memory


@pytest.fixture
def transition_factory():
    return make_transition
