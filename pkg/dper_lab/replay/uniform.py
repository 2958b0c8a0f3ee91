# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function, unicode_literals

from ..exceptions import InsufficientDataError
from .base import BaseSampler


class UniformSampler(BaseSampler):
    """
    Vanilla experience replay: every occupied slot is equally likely.

    Draws are independent and with replacement, so a buffer holding
    a single transition can still fill a batch of any size.
    """

    name = "uniform"

    def sample_indices(self, memory, batch_size, rng):
        if memory.size == 0:
            raise InsufficientDataError(
                "Cannot sample {} transitions from an empty buffer.".format(batch_size),
                {"size": 0, "batch_size": batch_size},
            )
        return rng.integers(0, memory.size, batch_size)


def sample_uniform(memory, batch_size, rng):
    return UniformSampler().sample(memory, batch_size, rng)
