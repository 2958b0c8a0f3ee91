# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function, unicode_literals
import abc
import io

import numpy as np
import six

from ..exceptions import CheckpointError, ContractViolation
from .sumtree import SumTree


class Transition(object):
    """
    One ``(s, a, r, s', terminal)`` experience tuple.

    Attributes
    ----------
    state : ndarray
        ``n`` values
    action : ndarray
        ``m`` values
    reward : float
    next_state : ndarray
        ``n`` values
    terminal : bool
        Episode ended in a true terminal state; the target does not bootstrap
    truncated : bool
        Episode was cut by the step limit; the target still bootstraps
    """

    def __init__(self, state, action, reward, next_state, terminal=False, truncated=False):
        self.state = np.asarray(state, dtype=np.float64).reshape(-1)
        self.action = np.asarray(action, dtype=np.float64).reshape(-1)
        self.reward = float(reward)
        self.next_state = np.asarray(next_state, dtype=np.float64).reshape(-1)
        self.terminal = bool(terminal)
        self.truncated = bool(truncated)

    def __repr__(self):
        return "<Transition r={:.4f}{}{}>".format(
            self.reward,
            " terminal" if self.terminal else "",
            " truncated" if self.truncated else "",
        )

    def is_finite(self):
        return bool(
            np.all(np.isfinite(self.state))
            and np.all(np.isfinite(self.action))
            and np.isfinite(self.reward)
            and np.all(np.isfinite(self.next_state))
        )


class Batch(object):
    """
    Column-wise view of ``b`` sampled transitions.
    """

    def __init__(self, states, actions, rewards, next_states, terminals, truncated=None):
        self.states = np.asarray(states, dtype=np.float64)
        self.actions = np.asarray(actions, dtype=np.float64)
        self.rewards = np.asarray(rewards, dtype=np.float64).reshape(-1)
        self.next_states = np.asarray(next_states, dtype=np.float64)
        self.terminals = np.asarray(terminals, dtype=bool).reshape(-1)
        if truncated is None:
            truncated = np.zeros_like(self.terminals)
        self.truncated = np.asarray(truncated, dtype=bool).reshape(-1)

    def __len__(self):
        return self.rewards.shape[0]

    def __repr__(self):
        return "<Batch b={}>".format(len(self))

    @classmethod
    def from_transitions(cls, transitions):
        return cls(
            [t.state for t in transitions],
            [t.action for t in transitions],
            [t.reward for t in transitions],
            [t.next_state for t in transitions],
            [t.terminal for t in transitions],
            [t.truncated for t in transitions],
        )

    def transitions(self):
        return [
            Transition(
                self.states[i],
                self.actions[i],
                self.rewards[i],
                self.next_states[i],
                self.terminals[i],
                self.truncated[i],
            )
            for i in range(len(self))
        ]


class SampleMeta(object):
    """
    Where a batch came from.

    Attributes
    ----------
    indices : ndarray
        Buffer slots of the ``b`` sampled transitions
    masses : ndarray
        Leaf masses of those slots at sampling time
    """

    def __init__(self, indices, masses):
        self.indices = np.asarray(indices, dtype=np.int64)
        self.masses = np.asarray(masses, dtype=np.float64)

    def __len__(self):
        return self.indices.shape[0]

    def __repr__(self):
        return "<SampleMeta b={}>".format(len(self))


class RingBuffer(object):
    """
    Fixed-capacity cyclic transition storage.

    Transitions are kept column-wise in ``numpy`` arrays. The
    ``write_index`` always points at the oldest slot once the buffer
    is full so every push overwrites the oldest transition.
    """

    SNAPSHOT_HEADER = 5

    def __init__(self, capacity, state_dim, action_dim):
        if capacity < 1:
            raise ContractViolation("Buffer capacity must be positive.")
        self.capacity = int(capacity)
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.states = np.zeros((self.capacity, self.state_dim))
        self.actions = np.zeros((self.capacity, self.action_dim))
        self.rewards = np.zeros(self.capacity)
        self.next_states = np.zeros((self.capacity, self.state_dim))
        self.terminals = np.zeros(self.capacity, dtype=bool)
        self.truncated = np.zeros(self.capacity, dtype=bool)
        self.write_index = 0
        self.size = 0

    def __len__(self):
        return self.size

    def __repr__(self):
        return "<{} {}/{}>".format(self.__class__.__name__, self.size, self.capacity)

    def push(self, transition):
        if transition.state.shape != (self.state_dim,) or transition.next_state.shape != (
            self.state_dim,
        ):
            raise ContractViolation(
                "Transition states must have {} values.".format(self.state_dim)
            )
        if transition.action.shape != (self.action_dim,):
            raise ContractViolation(
                "Transition action must have {} values.".format(self.action_dim)
            )

        slot = self.write_index
        self.states[slot] = transition.state
        self.actions[slot] = transition.action
        self.rewards[slot] = transition.reward
        self.next_states[slot] = transition.next_state
        self.terminals[slot] = transition.terminal
        self.truncated[slot] = transition.truncated

        self.write_index = (self.write_index + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)
        return slot

    def batch(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        return Batch(
            self.states[indices],
            self.actions[indices],
            self.rewards[indices],
            self.next_states[indices],
            self.terminals[indices],
            self.truncated[indices],
        )

    def transition(self, slot):
        if not 0 <= slot < self.size:
            raise ContractViolation("Slot {} is not occupied.".format(slot))
        return self.batch([slot]).transitions()[0]

    def save(self, path):
        """
        Write a flat binary snapshot.

        Layout: five little-endian ``int64`` header values
        ``capacity, state_dim, action_dim, size, write_index`` followed by
        ``size`` records of little-endian ``float64`` values
        ``state | action | reward | next_state | terminal | truncated``
        for slots ``0 .. size - 1``.
        """
        header = np.array(
            [self.capacity, self.state_dim, self.action_dim, self.size, self.write_index],
            dtype="<i8",
        )
        n = self.size
        records = np.hstack(
            [
                self.states[:n],
                self.actions[:n],
                self.rewards[:n, None],
                self.next_states[:n],
                self.terminals[:n, None],
                self.truncated[:n, None],
            ]
        ).astype("<f8")
        with io.open(path, "wb") as fid:
            fid.write(header.tobytes())
            fid.write(records.tobytes())

    @classmethod
    def load(cls, path):
        with io.open(path, "rb") as fid:
            raw = fid.read()

        header_bytes = cls.SNAPSHOT_HEADER * 8
        if len(raw) < header_bytes:
            raise CheckpointError("{} is too short for a buffer snapshot.".format(path))
        capacity, state_dim, action_dim, size, write_index = np.frombuffer(
            raw[:header_bytes], dtype="<i8"
        ).tolist()

        width = 2 * state_dim + action_dim + 3
        records = np.frombuffer(raw[header_bytes:], dtype="<f8")
        if records.size != size * width:
            raise CheckpointError(
                "{} holds {} values, header announces {} records of {}.".format(
                    path, records.size, size, width
                )
            )
        records = records.reshape(size, width)

        buffer = cls(capacity, state_dim, action_dim)
        n, m = state_dim, action_dim
        buffer.states[:size] = records[:, :n]
        buffer.actions[:size] = records[:, n : n + m]
        buffer.rewards[:size] = records[:, n + m]
        buffer.next_states[:size] = records[:, n + m + 1 : 2 * n + m + 1]
        buffer.terminals[:size] = records[:, 2 * n + m + 1] > 0.5
        buffer.truncated[:size] = records[:, 2 * n + m + 2] > 0.5
        buffer.size = size
        buffer.write_index = write_index
        return buffer


class ReplayMemory(object):
    """
    Ring buffer plus the sum tree holding one priority mass per slot.

    Slot ``k`` of the buffer is leaf ``k`` of the tree. A priority ``p``
    is stored as the mass ``(p + priority_eps) ** alpha``.

    Parameters
    ----------
    capacity : int
    state_dim, action_dim : int
    alpha : float, optional
        Priority exponent. ``0`` makes every mass ``1``.
    priority_eps : float, optional
        Additive floor keeping every stored transition reachable
    action_bound : float, optional
        When given, pushed actions are checked against it
    """

    def __init__(
        self,
        capacity,
        state_dim,
        action_dim,
        alpha=0.6,
        priority_eps=1e-3,
        action_bound=None,
    ):
        if alpha < 0 or priority_eps < 0:
            raise ContractViolation("alpha and priority_eps must be non-negative.")
        self.buffer = RingBuffer(capacity, state_dim, action_dim)
        self.tree = SumTree(capacity)
        self.alpha = float(alpha)
        self.priority_eps = float(priority_eps)
        self.action_bound = action_bound

    def __len__(self):
        return self.buffer.size

    def __repr__(self):
        return "<{} {}/{} alpha={} total_mass={}>".format(
            self.__class__.__name__,
            self.buffer.size,
            self.buffer.capacity,
            self.alpha,
            self.tree.total,
        )

    @property
    def size(self):
        return self.buffer.size

    @property
    def capacity(self):
        return self.buffer.capacity

    def mass(self, priorities):
        return (np.abs(np.asarray(priorities, dtype=np.float64)) + self.priority_eps) ** self.alpha

    def push(self, transition, priority=0.0):
        """
        Store a transition with its collection-time priority.

        Returns
        -------
        int
            Slot the transition was written to
        """
        if not np.isfinite(priority) or priority < 0:
            raise ContractViolation(
                "Priority must be finite and non-negative, got {}.".format(priority),
                {"priority": priority},
            )
        if not transition.is_finite():
            raise ContractViolation("Transition has non-finite values.")
        if self.action_bound is not None and np.any(
            np.abs(transition.action) > self.action_bound + 1e-12
        ):
            raise ContractViolation(
                "Transition action {} exceeds bound {}.".format(
                    transition.action.tolist(), self.action_bound
                )
            )

        slot = self.buffer.push(transition)
        self.tree.update([slot], self.mass(priority))
        return slot

    def batch(self, indices):
        return self.buffer.batch(indices)


class BaseSampler(six.with_metaclass(abc.ABCMeta, object)):
    """
    Base sampler from which all other samplers must subclass.

    A sampler decides which buffer slots form a mini-batch and
    whether the TD errors measured on that batch are written back
    as new priorities.
    """

    name = None
    """
    Name of the sampler as used in logs.
    """
    writes_back = False
    """
    Whether :meth:`update` changes stored priorities.
    """

    def __repr__(self):
        return "<{}>".format(self.__class__.__name__)

    @abc.abstractmethod
    def sample_indices(self, memory, batch_size, rng):
        """
        Draw ``batch_size`` occupied slots.

        .. note:: **MUST** be implemented by subclasses
        """

    def sample(self, memory, batch_size, rng):
        """
        Draw a batch.

        Returns
        -------
        tuple
            ``(Batch, SampleMeta)``
        """
        indices = self.sample_indices(memory, batch_size, rng)
        meta = SampleMeta(indices, memory.tree.get(indices))
        return memory.batch(indices), meta

    def update(self, memory, meta, deltas):
        """
        Hook receiving the TD errors of a batch this sampler drew.
        Does nothing by default.
        """
