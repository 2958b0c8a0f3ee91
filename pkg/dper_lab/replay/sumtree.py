# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function, unicode_literals

import numpy as np

from ..exceptions import ContractViolation


class SumTree(object):
    """
    Complete binary tree over ``capacity`` non-negative leaf masses.

    The tree is stored heap-style in one array of ``2 * capacity - 1``
    nodes: node ``i`` has children ``2i + 1`` and ``2i + 2`` and leaf
    ``k`` lives at node ``capacity - 1 + k``. Every internal node holds
    the sum of its two children so the root is the total mass and
    a prefix-mass query resolves to a leaf in ``O(log capacity)``.

    Capacity does not need to be a power of two. In that case leaves sit
    on two different depths and the left-to-right order of the descent
    is not the leaf index order, which does not matter for
    proportional sampling.

    All mutating and querying methods are vectorized over many leaves.
    """

    def __init__(self, capacity):
        if capacity < 1:
            raise ContractViolation("Sum tree capacity must be positive.")
        self.capacity = int(capacity)
        self.nodes = np.zeros(2 * self.capacity - 1, dtype=np.float64)

    def __len__(self):
        return self.capacity

    def __repr__(self):
        return "<{} capacity={} total={}>".format(
            self.__class__.__name__, self.capacity, self.total
        )

    @property
    def total(self):
        return float(self.nodes[0])

    @property
    def leaves(self):
        return self.nodes[self.capacity - 1 :]

    def get(self, leaves):
        return self.nodes[np.asarray(leaves, dtype=np.int64) + self.capacity - 1]

    def path(self, leaf):
        """
        Node indices from ``leaf`` up to and including the root.
        """
        node = int(leaf) + self.capacity - 1
        nodes = [node]
        while node > 0:
            node = (node - 1) // 2
            nodes.append(node)
        return nodes

    def update(self, leaves, masses):
        """
        Set leaf masses and repair every ancestor.

        When a leaf is repeated the last given mass wins.
        """
        leaves = np.asarray(leaves, dtype=np.int64).reshape(-1)
        masses = np.broadcast_to(
            np.asarray(masses, dtype=np.float64), leaves.shape
        )
        if leaves.size == 0:
            return
        if np.any(leaves < 0) or np.any(leaves >= self.capacity):
            raise ContractViolation(
                "Leaf index out of range [0, {}).".format(self.capacity)
            )
        if not np.all(np.isfinite(masses)) or np.any(masses < 0):
            raise ContractViolation("Leaf masses must be finite and non-negative.")

        # keep the last occurrence of every repeated leaf
        _, first_from_end = np.unique(leaves[::-1], return_index=True)
        keep = leaves.size - 1 - first_from_end
        nodes = leaves[keep] + self.capacity - 1
        self.nodes[nodes] = masses[keep]

        # a node is recomputed once per changed leaf depth below it;
        # the last recomputation always sees fresh children
        while nodes.size:
            nodes = np.unique((nodes[nodes > 0] - 1) // 2)
            if nodes.size:
                self.nodes[nodes] = self.nodes[2 * nodes + 1] + self.nodes[2 * nodes + 2]

    def find(self, queries):
        """
        Resolve prefix-mass queries to leaf indices.

        A query ``u`` in ``[0, total)`` descends left when ``u`` is below
        the left child's mass and right otherwise (after subtracting the
        left mass). Children with zero mass are never entered, so empty
        leaves cannot be returned while the total is positive.
        """
        queries = np.array(queries, dtype=np.float64).reshape(-1)
        nodes = np.zeros(queries.shape, dtype=np.int64)
        last_internal = self.capacity - 1

        while True:
            internal = nodes < last_internal
            if not internal.any():
                break
            current = nodes[internal]
            values = queries[internal]
            left = 2 * current + 1
            left_mass = self.nodes[left]
            right_mass = self.nodes[left + 1]
            go_right = ((values >= left_mass) & (right_mass > 0)) | (left_mass <= 0)
            queries[internal] = np.where(go_right, values - left_mass, values)
            nodes[internal] = np.where(go_right, left + 1, left)

        return nodes - last_internal

    def audit(self):
        """
        Largest absolute difference between an internal node
        and the sum of its children. ``O(capacity)``.
        """
        if self.capacity == 1:
            return 0.0
        internal = np.arange(self.capacity - 1)
        children = self.nodes[2 * internal + 1] + self.nodes[2 * internal + 2]
        return float(np.max(np.abs(self.nodes[internal] - children)))

    def rebuild(self):
        """
        Recompute every internal node from the leaves, deepest level first.
        """
        internal_count = self.capacity - 1
        if internal_count == 0:
            return
        depth = int(np.floor(np.log2(internal_count)))
        for level in range(depth, -1, -1):
            lo = 2 ** level - 1
            hi = min(2 ** (level + 1) - 1, internal_count)
            if lo >= hi:
                continue
            nodes = np.arange(lo, hi)
            self.nodes[nodes] = self.nodes[2 * nodes + 1] + self.nodes[2 * nodes + 2]

    def ensure_consistent(self, tolerance=1e-9):
        """
        Rebuild the tree when :meth:`audit` exceeds ``tolerance``.

        Returns
        -------
        float
            Drift found before any rebuild
        """
        drift = self.audit()
        if drift > tolerance:
            self.rebuild()
        return drift
