# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function, unicode_literals
import abc

import numpy as np
import six
from cached_property import cached_property

from ..exceptions import ContractViolation


class EnvSpec(object):
    """
    Constant description of an environment.

    Attributes
    ----------
    state_dim : int
        Observation dimensionality ``n``
    action_dim : int
        Action dimensionality ``m``
    action_bound : float
        Every action component is clipped to ``[-action_bound, action_bound]``
    max_episode_steps : int
        Episodes are truncated after this many steps
    """

    def __init__(self, state_dim, action_dim, action_bound, max_episode_steps):
        if state_dim < 1 or action_dim < 1:
            raise ContractViolation("Environment dimensions must be positive.")
        if not action_bound > 0:
            raise ContractViolation("Action bound must be positive.")
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.action_bound = float(action_bound)
        self.max_episode_steps = int(max_episode_steps)

    def as_tuple(self):
        return (
            self.state_dim,
            self.action_dim,
            self.action_bound,
            self.max_episode_steps,
        )

    def __eq__(self, other):
        return isinstance(other, EnvSpec) and self.as_tuple() == other.as_tuple()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.as_tuple())

    def __repr__(self):
        return "<EnvSpec n={} m={} bound={} steps={}>".format(*self.as_tuple())


class EnvState(object):
    """
    Immutable snapshot of an episode.

    Attributes
    ----------
    observation : ndarray
        What the agent sees, ``n`` finite values
    physics : ndarray
        Internal physical state the dynamics integrate
    elapsed : int
        Steps taken since reset
    """

    def __init__(self, observation, physics, elapsed=0):
        self.observation = np.array(observation, dtype=np.float64)
        self.physics = np.array(physics, dtype=np.float64)
        self.elapsed = int(elapsed)
        self.observation.setflags(write=False)
        self.physics.setflags(write=False)

    def __repr__(self):
        return "<EnvState t={} obs={}>".format(
            self.elapsed, np.array2string(self.observation, precision=4)
        )


class StepResult(object):
    """
    Outcome of one environment tick.

    ``done`` is set when the episode ended for any reason;
    ``terminal`` and ``truncated`` tell apart a true terminal state
    (no bootstrapping) from hitting the step limit (bootstrap as usual).
    """

    def __init__(self, state, reward, terminal=False, truncated=False):
        self.state = state
        self.reward = float(reward)
        self.terminal = bool(terminal)
        self.truncated = bool(truncated) and not self.terminal

    @property
    def next_observation(self):
        return self.state.observation

    @property
    def done(self):
        return self.terminal or self.truncated

    def __repr__(self):
        return "<StepResult reward={:.4f} terminal={} truncated={}>".format(
            self.reward, self.terminal, self.truncated
        )


class BaseEnv(six.with_metaclass(abc.ABCMeta, object)):
    """
    Base environment from which all other environments must subclass.

    Environments are stateless: every call takes the current
    :class:`.EnvState` and returns a new one, so one instance can drive
    any number of concurrent episodes.
    """

    name = None
    """
    Name of the environment as used on the command line.
    """

    def __repr__(self):
        return "<{} {!r}>".format(self.__class__.__name__, self.spec)

    @cached_property
    def spec(self):
        """
        Cached :class:`.EnvSpec` as returned by :meth:`get_spec`.
        """
        return self.get_spec()

    @abc.abstractmethod
    def get_spec(self):
        """
        Build the environment's :class:`.EnvSpec`.

        .. note:: **MUST** be implemented by subclasses.
        """

    @abc.abstractmethod
    def initial_physics(self, generator):
        """
        Draw the initial physical state with the given ``numpy`` generator.
        """

    @abc.abstractmethod
    def observe(self, physics):
        """
        Map physical state to the observation vector.
        """

    @abc.abstractmethod
    def advance(self, physics, action):
        """
        Integrate one tick.

        Returns
        -------
        tuple
            ``(physics, reward, terminal)``
        """

    def reset(self, seed):
        """
        Deterministic initial state for ``seed``.
        """
        generator = np.random.Generator(np.random.PCG64(int(seed)))
        physics = self.initial_physics(generator)
        return EnvState(self.observe(physics), physics, 0)

    def step(self, state, action):
        """
        Apply ``action`` to ``state``.

        Actions outside of the bound are clipped silently,
        the way saturated actuators behave.
        """
        spec = self.spec
        action = np.asarray(action, dtype=np.float64).reshape(-1)
        if action.shape != (spec.action_dim,):
            raise ContractViolation(
                "{} expects {} action components, got {}.".format(
                    self.name, spec.action_dim, action.shape[0]
                )
            )
        if not np.all(np.isfinite(action)):
            raise ContractViolation(
                "Action must be finite, got {}.".format(action.tolist())
            )
        if state.elapsed >= spec.max_episode_steps:
            raise ContractViolation(
                "Episode already reached its {} step limit.".format(
                    spec.max_episode_steps
                )
            )

        action = np.clip(action, -spec.action_bound, spec.action_bound)
        physics, reward, terminal = self.advance(state.physics, action)
        elapsed = state.elapsed + 1

        return StepResult(
            EnvState(self.observe(physics), physics, elapsed),
            reward,
            terminal=terminal,
            truncated=elapsed >= spec.max_episode_steps,
        )
