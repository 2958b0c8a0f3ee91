# -*- coding: utf-8 -*-
from __future__ import absolute_import, print_function, unicode_literals

from .base import (  # noqa
    BaseSampler,
    Batch,
    ReplayMemory,
    RingBuffer,
    SampleMeta,
    Transition,
)
from .prioritized import PrioritizedSampler, sample_prioritized, update_priorities  # noqa
from .sumtree import SumTree  # noqa
from .uniform import UniformSampler, sample_uniform  # noqa


def push(memory, transition, priority=0.0):
    return memory.push(transition, priority)
