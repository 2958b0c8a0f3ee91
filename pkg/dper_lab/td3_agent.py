# -*- coding: utf-8 -*-
"""
Twin Delayed DDPG.

Two critics are trained against one shared target built from the
minimum of two target critics evaluated at a smoothed target action.
The actor follows the deterministic policy gradient of the first critic
and, together with all target networks, is updated once every
``policy_delay`` critic updates (the delay itself is scheduled by the
training loop).
"""
from __future__ import absolute_import, division, print_function, unicode_literals
import io
import logging
import struct
from collections import OrderedDict

import numpy as np

from .constants import OutputActivation, PrioritySource
from .exceptions import CheckpointError, ContractViolation, DivergenceError
from .nn_core import (
    INITIALIZER,
    TENSOR_NAMES,
    AdamState,
    MlpParams,
    adam_step,
    mlp_backward,
    mlp_forward,
    polyak_update,
    sample_gaussian,
)
from .replay.base import Batch


log = logging.getLogger(__name__)

CHECKPOINT_MAGIC = b"DPERCKPT"
CHECKPOINT_VERSION = 1


class Td3Config(object):
    """
    TD3 hyperparameters.

    Noise scales (``sigma_smooth``, ``smooth_clip``, ``sigma_explore``) are
    given in units of the action bound and scaled by it inside the agent.

    Parameters
    ----------
    gamma : float
        Discount in ``(0, 1]``
    tau : float
        Polyak rate in ``(0, 1]``
    policy_delay : int
        Critic updates per actor update
    sigma_smooth : float
        Target policy smoothing noise standard deviation
    smooth_clip : float
        Target policy smoothing noise is clipped to ``[-c, c]``
    sigma_explore : float
        Exploration noise standard deviation
    batch_size : int
    hidden : int
        Hidden layer width of every network
    lr_actor, lr_critic : float
        Adam learning rates
    priority_source : PrioritySource
        Critic estimate the stored TD error is measured against
    """

    def __init__(
        self,
        gamma=0.99,
        tau=0.005,
        policy_delay=2,
        sigma_smooth=0.2,
        smooth_clip=0.5,
        sigma_explore=0.1,
        batch_size=256,
        hidden=256,
        lr_actor=3e-4,
        lr_critic=3e-4,
        priority_source=PrioritySource.critic1,
    ):
        self.gamma = float(gamma)
        self.tau = float(tau)
        self.policy_delay = int(policy_delay)
        self.sigma_smooth = float(sigma_smooth)
        self.smooth_clip = float(smooth_clip)
        self.sigma_explore = float(sigma_explore)
        self.batch_size = int(batch_size)
        self.hidden = int(hidden)
        self.lr_actor = float(lr_actor)
        self.lr_critic = float(lr_critic)
        self.priority_source = PrioritySource(priority_source)

        if not 0 < self.gamma <= 1 or not 0 < self.tau <= 1:
            raise ContractViolation("gamma and tau must be within (0, 1].")
        if self.policy_delay < 1 or self.batch_size < 1 or self.hidden < 1:
            raise ContractViolation(
                "policy_delay, batch_size and hidden must be positive."
            )
        if min(self.sigma_smooth, self.smooth_clip, self.sigma_explore) < 0:
            raise ContractViolation("Noise scales must be non-negative.")

    def __repr__(self):
        return (
            "<Td3Config gamma={} tau={} M={} sigma_s={} c={} sigma_e={} b={}>".format(
                self.gamma,
                self.tau,
                self.policy_delay,
                self.sigma_smooth,
                self.smooth_clip,
                self.sigma_explore,
                self.batch_size,
            )
        )


class AgentNets(object):
    """
    The six TD3 networks and their two optimizer states.

    The critics share one :class:`.AdamState` over both parameter sets.
    """

    NAMES = (
        "actor",
        "critic1",
        "critic2",
        "actor_target",
        "critic1_target",
        "critic2_target",
    )

    def __init__(
        self,
        actor,
        critic1,
        critic2,
        actor_target,
        critic1_target,
        critic2_target,
        actor_adam,
        critic_adam,
    ):
        self.actor = actor
        self.critic1 = critic1
        self.critic2 = critic2
        self.actor_target = actor_target
        self.critic1_target = critic1_target
        self.critic2_target = critic2_target
        self.actor_adam = actor_adam
        self.critic_adam = critic_adam

    @classmethod
    def initialize(cls, state_dim, action_dim, action_bound, config, rng):
        """
        Fresh networks; every target starts as an exact copy of its online network.
        """
        actor = MlpParams.initialize(
            state_dim,
            action_dim,
            rng,
            hidden=config.hidden,
            output_activation=OutputActivation.tanh,
            action_bound=action_bound,
            name="actor",
        )
        critic1 = MlpParams.initialize(
            state_dim + action_dim, 1, rng, hidden=config.hidden, name="critic1"
        )
        critic2 = MlpParams.initialize(
            state_dim + action_dim, 1, rng, hidden=config.hidden, name="critic2"
        )
        log.info(
            "Initialized actor and twin critics (hidden=%d) with %s",
            config.hidden,
            INITIALIZER,
        )
        return cls(
            actor,
            critic1,
            critic2,
            actor.copy(name="actor_target"),
            critic1.copy(name="critic1_target"),
            critic2.copy(name="critic2_target"),
            AdamState(actor, lr=config.lr_actor),
            AdamState((critic1, critic2), lr=config.lr_critic),
        )

    def networks(self):
        return OrderedDict((name, getattr(self, name)) for name in self.NAMES)

    @classmethod
    def from_tensors(cls, tensors):
        """
        Rebuild networks and optimizer states from flat checkpoint tensors.
        """
        bound = float(tensors["meta.action_bound"])
        networks = {}
        for name in cls.NAMES:
            networks[name] = MlpParams(
                {key: tensors["{}.{}".format(name, key)] for key in TENSOR_NAMES},
                output_activation=OutputActivation.tanh
                if name.startswith("actor")
                else OutputActivation.identity,
                action_bound=bound,
                name=name,
            )

        states = {}
        for name, group in (
            ("actor_adam", networks["actor"]),
            ("critic_adam", (networks["critic1"], networks["critic2"])),
        ):
            lr, beta1, beta2, eps = tensors["{}.hyper".format(name)].tolist()
            state = AdamState(group, lr=lr, beta1=beta1, beta2=beta2, eps=eps)
            state.t = int(tensors["{}.t".format(name)])
            for index, (m, v) in enumerate(zip(state.m, state.v)):
                for key in TENSOR_NAMES:
                    m.tensors[key] = tensors["{}.m{}.{}".format(name, index, key)]
                    v.tensors[key] = tensors["{}.v{}.{}".format(name, index, key)]
            states[name] = state

        return cls(
            *[networks[name] for name in cls.NAMES]
            + [states["actor_adam"], states["critic_adam"]]
        )


class Td3Agent(object):
    """
    TD3 learner over :class:`.AgentNets`.

    Parameters
    ----------
    state_dim, action_dim : int
    action_bound : float
    config : Td3Config, optional
    rng : Rng, optional
        Used only to initialize weights; required unless ``nets`` is given
    nets : AgentNets, optional
        Already built networks, e.g. from a checkpoint
    """

    def __init__(
        self, state_dim, action_dim, action_bound, config=None, rng=None, nets=None
    ):
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.action_bound = float(action_bound)
        self.config = config or Td3Config()
        if nets is None:
            if rng is None:
                raise ContractViolation("An rng is required to initialize networks.")
            nets = AgentNets.initialize(
                self.state_dim, self.action_dim, self.action_bound, self.config, rng
            )
        self.nets = nets

    @classmethod
    def from_spec(cls, spec, config=None, rng=None):
        return cls(spec.state_dim, spec.action_dim, spec.action_bound, config, rng)

    def __repr__(self):
        return "<Td3Agent n={} m={} bound={} {!r}>".format(
            self.state_dim, self.action_dim, self.action_bound, self.config
        )

    @property
    def exploration_std(self):
        return self.config.sigma_explore * self.action_bound

    @property
    def smoothing_std(self):
        return self.config.sigma_smooth * self.action_bound

    @property
    def smoothing_clip(self):
        return self.config.smooth_clip * self.action_bound

    def _state_actions(self, states, actions):
        return np.hstack([states, actions])

    def policy(self, states):
        """
        Deterministic actor output for a ``b x n`` matrix of states.
        """
        actions, _ = mlp_forward(self.nets.actor, np.atleast_2d(states))
        return actions

    def act(self, state, rng, sigma=None):
        """
        Exploratory action ``clip(A(s) + N(0, sigma^2 I), +-bound)`` for one state.

        ``sigma`` is an absolute standard deviation and defaults to
        :attr:`exploration_std`.
        """
        sigma = self.exploration_std if sigma is None else sigma
        action = self.policy(np.asarray(state, dtype=np.float64).reshape(1, -1))[0]
        noise = sample_gaussian(rng, 0.0, sigma, action.shape)
        return np.clip(action + noise, -self.action_bound, self.action_bound)

    def target_values(self, next_states, rng=None, sigma=None, clip=None):
        """
        Both target critics at the smoothed target action.

        Returns
        -------
        tuple
            ``(q1, q2)`` vectors
        """
        sigma = self.smoothing_std if sigma is None else sigma
        clip = self.smoothing_clip if clip is None else clip
        nets = self.nets

        target_actions, _ = mlp_forward(nets.actor_target, next_states)
        if rng is None:
            if sigma > 0:
                raise ContractViolation("Smoothing noise requires an rng.")
            noise = np.zeros_like(target_actions)
        else:
            noise = sample_gaussian(rng, 0.0, sigma, target_actions.shape)
        noise = np.clip(noise, -clip, clip)
        target_actions = np.clip(
            target_actions + noise, -self.action_bound, self.action_bound
        )

        inputs = self._state_actions(next_states, target_actions)
        q1, _ = mlp_forward(nets.critic1_target, inputs)
        q2, _ = mlp_forward(nets.critic2_target, inputs)
        return q1[:, 0], q2[:, 0]

    def compute_targets(self, batch, rng=None, gamma=None, sigma=None, clip=None):
        """
        Clipped double Q targets
        ``r + gamma * (1 - terminal) * min(C1'(s', a~), C2'(s', a~))``.

        Transitions cut by the step limit are not terminal and bootstrap.
        Pass ``sigma=0`` without an ``rng`` for noise-free targets.
        """
        gamma = self.config.gamma if gamma is None else gamma
        q1, q2 = self.target_values(batch.next_states, rng, sigma, clip)
        not_terminal = 1.0 - batch.terminals.astype(np.float64)
        return batch.rewards + gamma * not_terminal * np.minimum(q1, q2)

    def td_errors(self, batch, targets):
        """
        ``|Y - C(s, a)|`` per transition, ``C`` chosen by the priority source.
        """
        inputs = self._state_actions(batch.states, batch.actions)
        q1, _ = mlp_forward(self.nets.critic1, inputs)
        estimate = q1[:, 0]
        if self.config.priority_source is PrioritySource.min:
            q2, _ = mlp_forward(self.nets.critic2, inputs)
            estimate = np.minimum(estimate, q2[:, 0])
        return np.abs(targets - estimate)

    def collection_priority(self, transition):
        """
        TD error of a freshly collected transition under the current
        networks, with a noise-free target.
        """
        batch = Batch.from_transitions([transition])
        targets = self.compute_targets(batch, sigma=0.0)
        return float(self.td_errors(batch, targets)[0])

    def critic_losses_and_grads(self, batch, targets):
        """
        Mean squared errors of both critics against ``targets``
        and their exact gradients.

        Returns
        -------
        tuple
            ``(losses, grads, abs_delta)`` where ``losses`` and ``grads``
            are pairs for critic 1 and critic 2
        """
        targets = np.asarray(targets, dtype=np.float64).reshape(-1)
        if targets.shape[0] != len(batch):
            raise ContractViolation(
                "Got {} targets for a batch of {}.".format(targets.shape[0], len(batch))
            )
        inputs = self._state_actions(batch.states, batch.actions)
        size = float(len(batch))

        losses, grads, estimates = [], [], []
        for critic in (self.nets.critic1, self.nets.critic2):
            q, cache = mlp_forward(critic, inputs)
            residual = q[:, 0] - targets
            losses.append(float(np.mean(residual * residual)))
            estimates.append(q[:, 0])
            critic_grads, _ = mlp_backward(
                critic, cache, (2.0 / size * residual)[:, None]
            )
            grads.append(critic_grads)

        if self.config.priority_source is PrioritySource.min:
            abs_delta = np.abs(targets - np.minimum(*estimates))
        else:
            abs_delta = np.abs(targets - estimates[0])
        return tuple(losses), tuple(grads), abs_delta

    def critic_update(self, batch, targets):
        """
        One joint Adam step of both critics towards the same targets.

        Returns
        -------
        tuple
            ``(loss1, loss2, abs_delta)`` measured before the step
        """
        losses, grads, abs_delta = self.critic_losses_and_grads(batch, targets)
        if not all(np.isfinite(losses)):
            raise DivergenceError(
                "Critic loss became non-finite.",
                {
                    "critic_losses": list(losses),
                    "critic_adam_t": self.nets.critic_adam.t,
                    "max_abs_target": float(np.nanmax(np.abs(targets))),
                },
            )
        adam_step((self.nets.critic1, self.nets.critic2), grads, self.nets.critic_adam)
        return losses[0], losses[1], abs_delta

    def actor_objective_and_grads(self, batch):
        """
        ``-mean C1(s, A(s))`` and its gradient with respect to the actor.
        Critic parameters are only read.
        """
        states = batch.states
        actions, actor_cache = mlp_forward(self.nets.actor, states)
        q, critic_cache = mlp_forward(
            self.nets.critic1, self._state_actions(states, actions)
        )
        loss = -float(np.mean(q))
        output_grad = np.full(q.shape, -1.0 / len(batch))
        _, input_grad = mlp_backward(self.nets.critic1, critic_cache, output_grad)
        actor_grads, _ = mlp_backward(
            self.nets.actor, actor_cache, input_grad[:, self.state_dim :]
        )
        return loss, actor_grads

    def actor_update(self, batch):
        """
        One Adam step of the actor ascending the first critic.

        Returns
        -------
        float
            Actor loss ``-mean Q`` before the step
        """
        loss, grads = self.actor_objective_and_grads(batch)
        if not np.isfinite(loss):
            raise DivergenceError(
                "Actor loss became non-finite.",
                {"actor_loss": loss, "actor_adam_t": self.nets.actor_adam.t},
            )
        adam_step(self.nets.actor, grads, self.nets.actor_adam)
        return loss

    def soft_update(self, tau=None):
        """
        Polyak-average all three target networks towards their online networks.
        """
        tau = self.config.tau if tau is None else tau
        nets = self.nets
        polyak_update(nets.actor_target, nets.actor, tau)
        polyak_update(nets.critic1_target, nets.critic1, tau)
        polyak_update(nets.critic2_target, nets.critic2, tau)

    def _checkpoint_tensors(self):
        tensors = OrderedDict()
        tensors["meta.action_bound"] = np.array(self.action_bound)
        for name, params in self.nets.networks().items():
            for key, value in params.items():
                tensors["{}.{}".format(name, key)] = value
        for name in ("actor_adam", "critic_adam"):
            state = getattr(self.nets, name)
            tensors["{}.t".format(name)] = np.array(float(state.t))
            tensors["{}.hyper".format(name)] = np.array(
                [state.lr, state.beta1, state.beta2, state.eps]
            )
            for group, (m, v) in enumerate(zip(state.m, state.v)):
                for key in TENSOR_NAMES:
                    tensors["{}.m{}.{}".format(name, group, key)] = m[key]
                    tensors["{}.v{}.{}".format(name, group, key)] = v[key]
        return tensors

    def save(self, path):
        """
        Write all six networks and both optimizer states to a flat binary file.

        Layout: ``DPERCKPT`` magic, ``uint32`` version, ``uint32`` tensor count,
        then per tensor a ``uint16`` name length, the UTF-8 name,
        a ``uint8`` rank, ``int64`` dimensions and little-endian ``float64``
        values.
        """
        tensors = self._checkpoint_tensors()
        with io.open(path, "wb") as fid:
            fid.write(CHECKPOINT_MAGIC)
            fid.write(struct.pack("<II", CHECKPOINT_VERSION, len(tensors)))
            for name, value in tensors.items():
                encoded = name.encode("utf-8")
                value = np.asarray(value, dtype="<f8")
                fid.write(struct.pack("<H", len(encoded)))
                fid.write(encoded)
                fid.write(struct.pack("<B", value.ndim))
                fid.write(struct.pack("<{}q".format(value.ndim), *value.shape))
                fid.write(value.tobytes())

    @classmethod
    def load(cls, path, config=None):
        with io.open(path, "rb") as fid:
            raw = fid.read()

        if raw[: len(CHECKPOINT_MAGIC)] != CHECKPOINT_MAGIC:
            raise CheckpointError("{} is not a checkpoint.".format(path))
        offset = len(CHECKPOINT_MAGIC)
        try:
            version, count = struct.unpack_from("<II", raw, offset)
            if version != CHECKPOINT_VERSION:
                raise CheckpointError(
                    "{} has checkpoint version {}, expected {}.".format(
                        path, version, CHECKPOINT_VERSION
                    )
                )
            offset += 8
            tensors = {}
            for _ in range(count):
                (length,) = struct.unpack_from("<H", raw, offset)
                offset += 2
                name = raw[offset : offset + length].decode("utf-8")
                offset += length
                (ndim,) = struct.unpack_from("<B", raw, offset)
                offset += 1
                shape = struct.unpack_from("<{}q".format(ndim), raw, offset)
                offset += 8 * ndim
                size = int(np.prod(shape)) if ndim else 1
                value = np.frombuffer(raw, dtype="<f8", count=size, offset=offset)
                offset += 8 * size
                tensors[name] = value.reshape(shape).astype(np.float64)
        except (struct.error, ValueError) as e:
            raise CheckpointError("{} is truncated: {}".format(path, e))

        try:
            nets = AgentNets.from_tensors(tensors)
        except KeyError as e:
            raise CheckpointError("{} lacks tensor {}.".format(path, e))

        actor = nets.actor
        return cls(actor.in_dim, actor.out_dim, actor.action_bound, config=config, nets=nets)
