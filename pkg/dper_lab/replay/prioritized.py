# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function, unicode_literals

import numpy as np

from ..exceptions import (
    ContractViolation,
    DegeneratePrioritiesError,
    InsufficientDataError,
)
from .base import BaseSampler


class PrioritizedSampler(BaseSampler):
    """
    Proportional prioritized replay.

    Slot ``i`` is drawn with probability ``mass_i / sum_k mass_k``.
    Sampling is stratified: the total mass is cut into ``b`` equal
    segments and one uniform point is drawn in each, which is then
    resolved to a slot by descending the sum tree.

    No importance-sampling weights are produced.
    """

    name = "prioritized"
    writes_back = True

    def sample_indices(self, memory, batch_size, rng):
        if memory.size == 0:
            raise InsufficientDataError(
                "Cannot sample {} transitions from an empty buffer.".format(batch_size),
                {"size": 0, "batch_size": batch_size},
            )
        total = memory.tree.total
        if not total > 0:
            raise DegeneratePrioritiesError(
                "Total priority mass is {}; nothing can be sampled.".format(total),
                {"total": total},
            )

        segment = total / batch_size
        queries = (np.arange(batch_size) + rng.random(batch_size)) * segment
        return memory.tree.find(queries)

    def update(self, memory, meta, deltas):
        update_priorities(memory, meta, deltas)


def sample_prioritized(memory, batch_size, rng):
    return PrioritizedSampler().sample(memory, batch_size, rng)


def update_priorities(memory, meta, deltas):
    """
    Store ``(|delta| + priority_eps) ** alpha`` for every sampled slot
    and repair the tree.
    """
    deltas = np.asarray(deltas, dtype=np.float64).reshape(-1)
    if deltas.shape[0] != len(meta):
        raise ContractViolation(
            "Got {} TD errors for a batch of {}.".format(deltas.shape[0], len(meta)),
            {"deltas": deltas.shape[0], "batch_size": len(meta)},
        )
    if not np.all(np.isfinite(deltas)):
        raise ContractViolation("TD errors must be finite.")
    memory.tree.update(meta.indices, memory.mass(deltas))
