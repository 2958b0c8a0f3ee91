# -*- coding: utf-8 -*-
from __future__ import division, print_function, unicode_literals

import numpy as np
import pytest

from dper_lab.exceptions import ContractViolation
from dper_lab.replay import SumTree


def assert_consistent(tree):
    assert tree.audit() <= 1e-9


class TestSumTree(object):
    def test_init(self):
        tree = SumTree(5)

        assert len(tree) == 5
        assert tree.nodes.shape == (9,)
        assert tree.total == 0.0

    def test_invalid_capacity(self):
        with pytest.raises(ContractViolation):
            SumTree(0)

    def test_single_leaf(self):
        tree = SumTree(1)
        tree.update([0], [2.5])

        assert tree.total == 2.5
        assert list(tree.find([0.0, 2.4])) == [0, 0]
        assert tree.audit() == 0.0

    def test_update(self):
        tree = SumTree(4)
        tree.update([0, 1, 2, 3], [1.0, 2.0, 3.0, 4.0])

        assert tree.total == 10.0
        assert list(tree.get([1, 3])) == [2.0, 4.0]
        assert_consistent(tree)

    def test_update_repeated_leaf(self):
        tree = SumTree(4)
        tree.update([2, 2, 2], [1.0, 5.0, 3.0])

        assert tree.get([2])[0] == 3.0
        assert tree.total == 3.0

    def test_update_invalid(self):
        tree = SumTree(4)

        with pytest.raises(ContractViolation):
            tree.update([4], [1.0])
        with pytest.raises(ContractViolation):
            tree.update([0], [-1.0])
        with pytest.raises(ContractViolation):
            tree.update([0], [np.nan])

    def test_path(self):
        tree = SumTree(4)

        assert tree.path(0) == [3, 1, 0]
        assert tree.path(3) == [6, 2, 0]

    def test_find(self):
        tree = SumTree(4)
        tree.update([0, 1, 2, 3], [1.0, 2.0, 3.0, 4.0])

        assert list(tree.find([0.0, 0.99, 1.0, 2.99, 3.0, 5.99, 6.0, 9.99])) == [
            0,
            0,
            1,
            1,
            2,
            2,
            3,
            3,
        ]

    def test_find_skips_zero_mass(self):
        tree = SumTree(4)
        tree.update([1, 3], [1.0, 3.0])

        found = tree.find(np.linspace(0, tree.total, 50))

        assert set(found) <= {1, 3}

    @pytest.mark.parametrize("capacity", [3, 5, 6, 7, 100])
    def test_non_power_of_two(self, capacity):
        tree = SumTree(capacity)
        masses = np.arange(1, capacity + 1, dtype=float)
        tree.update(np.arange(capacity), masses)

        assert tree.total == pytest.approx(masses.sum())
        assert_consistent(tree)

        found = tree.find(np.random.RandomState(0).uniform(0, tree.total, 20000))
        frequencies = np.bincount(found, minlength=capacity) / found.size
        assert np.allclose(frequencies, masses / masses.sum(), atol=0.02)

    def test_interleaved_operations(self):
        rng = np.random.RandomState(3)
        tree = SumTree(37)
        for i in range(10000):
            if rng.rand() < 0.5:
                tree.update([i % 37], [rng.exponential()])
            else:
                leaves = rng.randint(0, 37, 8)
                tree.update(leaves, rng.exponential(size=8))

        assert_consistent(tree)
        assert tree.total == pytest.approx(tree.leaves.sum(), rel=1e-12)

    def test_rebuild(self):
        tree = SumTree(6)
        tree.update(np.arange(6), np.ones(6))
        tree.nodes[0] = 100.0

        assert tree.audit() > 1
        assert tree.ensure_consistent() > 1
        assert tree.total == 6.0
        assert tree.ensure_consistent() == 0.0
