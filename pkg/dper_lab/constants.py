# -*- coding: utf-8 -*-
from __future__ import absolute_import, print_function, unicode_literals
import enum


class ReplayStrategy(enum.Enum):
    """
    Experience replay strategy enum.

    :``er``:
        critic and actor batches are both drawn uniformly
    :``per``:
        critic and actor batches are both drawn proportionally
        to the stored TD error priorities
    :``dper`` (default):
        critic batches are drawn by priority while the actor
        trains on the most on-policy of ``K`` uniform candidates
    :``dper-uniform``:
        same as ``dper`` except the critic samples uniformly
    """

    er = "er"
    per = "per"
    dper = "dper"
    dper_uniform = "dper-uniform"

    @property
    def is_decoupled(self):
        return self in (ReplayStrategy.dper, ReplayStrategy.dper_uniform)

    @property
    def uses_priorities(self):
        return self in (ReplayStrategy.per, ReplayStrategy.dper)


class KlMode(enum.Enum):
    """
    How candidate actor batches are scored.

    :``full`` (default):
        KL divergence between the batch's full Gaussian
        and the exploration noise distribution
    :``diag``:
        covariance assumed equal to the exploration noise,
        leaving only the squared mean deviation term
    """

    full = "full"
    diag = "diag"


class PrioritySource(enum.Enum):
    """
    Which critic estimate the stored TD error is measured against.
    """

    critic1 = "critic1"
    min = "min"


class OutputActivation(enum.Enum):
    """
    Output layer activation of :class:`dper_lab.nn_core.MlpParams`.

    :``identity``: unbounded output, used by critics
    :``tanh``: ``bound * tanh(z)``, used by actors
    """

    identity = "identity"
    tanh = "tanh"


class EnvName(enum.Enum):
    pendulum = "pendulum"
    reacher = "reacher"


STREAM_NAMES = (
    "init",
    "env",
    "exploration",
    "critic_sampling",
    "actor_sampling",
    "smoothing",
    "evaluation",
)
"""
Named random streams derived from one master seed, in derivation order.
Appending new names is safe; reordering changes every run.
"""

PHASES = (
    "env_stepping",
    "acting",
    "priority",
    "sampling",
    "forward_backward",
    "eta_scoring",
    "evaluation",
)
