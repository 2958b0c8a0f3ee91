# -*- coding: utf-8 -*-
"""
One training run: one strategy, one ``K``, one seed.

After ``warmup`` uniformly random steps, every environment step is
followed by one critic update and every ``policy_delay``-th critic update
by one actor update plus soft target updates. Evaluations happen at every
multiple of ``eval_interval`` steps, warmup included.
"""
from __future__ import absolute_import, division, print_function, unicode_literals
import logging
from collections import OrderedDict

import numpy as np

from ..constants import ReplayStrategy
from ..dper import KlReference, draw_candidates, score_candidates
from ..envs import get_env
from ..exceptions import ContractViolation, DivergenceError, NumericError
from ..nn_core import INITIALIZER, Rng, mlp_forward
from ..replay import PrioritizedSampler, ReplayMemory, Transition, UniformSampler
from ..td3_agent import Td3Agent
from ..utils import PhaseTimer


log = logging.getLogger(__name__)


class EvalRecord(object):
    """
    Result of evaluating the deterministic policy at one step.
    """

    def __init__(self, step, mean_return, std_return, seed):
        self.step = int(step)
        self.mean_return = float(mean_return)
        self.std_return = float(std_return)
        self.seed = int(seed)

    def __eq__(self, other):
        return isinstance(other, EvalRecord) and self.as_tuple() == other.as_tuple()

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "<EvalRecord seed={} step={} return={:.3f}+-{:.3f}>".format(
            self.seed, self.step, self.mean_return, self.std_return
        )

    def as_tuple(self):
        return (self.step, self.mean_return, self.std_return, self.seed)


class DiagRecord(object):
    """
    Statistics of one critic update and, when one happened
    right after it, of the actor update.
    """

    def __init__(
        self,
        update,
        step,
        critic_loss1,
        critic_loss2,
        mean_abs_delta,
        actor_loss=None,
        chosen_eta=None,
        chosen_index=None,
        mu_sq_norm=None,
        mean_sq_dev=None,
        candidate_etas=(),
    ):
        self.update = update
        self.step = step
        self.critic_loss1 = critic_loss1
        self.critic_loss2 = critic_loss2
        self.mean_abs_delta = mean_abs_delta
        self.actor_loss = actor_loss
        self.chosen_eta = chosen_eta
        self.chosen_index = chosen_index
        self.mu_sq_norm = mu_sq_norm
        self.mean_sq_dev = mean_sq_dev
        self.candidate_etas = list(candidate_etas)

    def __repr__(self):
        return "<DiagRecord update={} step={}>".format(self.update, self.step)


class RunLog(object):
    """
    Everything one run produced.

    Attributes
    ----------
    evals : list
        :class:`EvalRecord` in increasing step order
    diagnostics : list
        :class:`DiagRecord` per critic update
    phase_totals : OrderedDict
        Seconds spent per phase
    wall_time : float
        Seconds spent in the training loop
    failed : bool
        Run aborted on a numeric failure
    error : dict or None
        ``{"error", "message", "details"}`` of that failure
    agent, memory
        Final agent and replay memory, only kept when asked for
    """

    def __init__(self, strategy, env, seed, k=None):
        self.strategy = ReplayStrategy(strategy)
        self.env = env
        self.seed = int(seed)
        self.k = k
        self.evals = []
        self.diagnostics = []
        self.phase_totals = OrderedDict()
        self.wall_time = 0.0
        self.failed = False
        self.error = None
        self.critic_updates = 0
        self.actor_updates = 0
        self.buffer_size = 0
        self.checkpoint = None
        self.agent = None
        self.memory = None

    def __repr__(self):
        return "<RunLog {} k={} env={} seed={} evals={}{}>".format(
            self.strategy.value,
            self.k,
            getattr(self.env, "value", self.env),
            self.seed,
            len(self.evals),
            " failed" if self.failed else "",
        )

    @property
    def key(self):
        return (getattr(self.env, "value", self.env), self.strategy.value, self.k or 0)

    @property
    def eval_steps(self):
        return [r.step for r in self.evals]

    def add_eval(self, record):
        if self.evals and record.step <= self.evals[-1].step:
            raise ContractViolation(
                "Evaluation at step {} does not follow step {}.".format(
                    record.step, self.evals[-1].step
                )
            )
        self.evals.append(record)


def evaluate(actor, env, episodes, eval_seed):
    """
    Roll out the deterministic policy for ``episodes`` episodes.

    Episode ``i`` starts from ``env.reset(eval_seed + i)``. Nothing but the
    environment's own state is touched.

    Returns
    -------
    tuple
        Mean and population standard deviation of undiscounted returns
    """
    if episodes < 1:
        raise ContractViolation("At least one evaluation episode is required.")

    returns = []
    for episode in range(episodes):
        state = env.reset(eval_seed + episode)
        total = 0.0
        while True:
            action, _ = mlp_forward(actor, state.observation[None, :])
            result = env.step(state, action[0])
            total += result.reward
            if result.done:
                break
            state = result.state
        returns.append(total)

    returns = np.asarray(returns)
    return float(returns.mean()), float(returns.std())


class Trainer(object):
    """
    Stateful driver of a single run.

    Parameters
    ----------
    config : ExperimentConfig
    seed : int
        Master seed all random streams derive from
    strategy : ReplayStrategy, optional
        Defaults to the config's first strategy
    keep_state : bool, optional
        Attach the final agent and replay memory to the :class:`RunLog`
    checkpoint_path : str, optional
        Where to save the final agent
    """

    def __init__(self, config, seed, strategy=None, keep_state=False, checkpoint_path=None):
        self.config = config
        self.seed = int(seed)
        self.strategy = ReplayStrategy(strategy or config.strategy)
        self.k = config.k_for(self.strategy)
        self.keep_state = keep_state
        self.checkpoint_path = checkpoint_path

        self.env = get_env(config.env)
        spec = self.env.spec
        self.rngs = Rng.streams(self.seed)
        self.agent = Td3Agent.from_spec(spec, config.td3_config(), self.rngs["init"])
        self.memory = ReplayMemory(
            config.capacity,
            spec.state_dim,
            spec.action_dim,
            alpha=config.alpha,
            priority_eps=config.priority_eps,
            action_bound=spec.action_bound,
        )
        self.critic_sampler = (
            PrioritizedSampler() if self.strategy.uses_priorities else UniformSampler()
        )
        self.reference = None
        if self.strategy.is_decoupled:
            self.reference = KlReference.from_exploration(
                self.agent.exploration_std, spec.action_dim
            )

        self.timer = PhaseTimer()
        self.run_log = RunLog(self.strategy, config.env, self.seed, self.k)
        self.state = None

    def __repr__(self):
        return "<Trainer {} k={} seed={}>".format(self.strategy.value, self.k, self.seed)

    def run(self):
        config = self.config
        log.info(
            "Starting %s run (K=%s) on %s with seed %d, weights from %s",
            self.strategy.value,
            self.k,
            config.env.value,
            self.seed,
            INITIALIZER,
        )

        self.timer.start()
        try:
            with self.timer.phase("env_stepping"):
                self.state = self.env.reset(self.rngs["env"].seed())
            for step in range(1, config.steps + 1):
                self.collect(step)
                if step > config.warmup:
                    self.update(step)
                if step % config.eval_interval == 0:
                    self.evaluate(step)
        except NumericError as e:
            self.run_log.failed = True
            self.run_log.error = {
                "error": e.__class__.__name__,
                "message": str(e),
                "details": e.details,
            }
            log.error(
                "%s run on %s with seed %d diverged: %s",
                self.strategy.value,
                config.env.value,
                self.seed,
                e,
            )
        finally:
            self.timer.stop()

        run_log = self.run_log
        run_log.wall_time = self.timer.wall_time
        run_log.phase_totals = OrderedDict(self.timer.totals)
        run_log.buffer_size = self.memory.size
        if self.checkpoint_path and not run_log.failed:
            self.agent.save(self.checkpoint_path)
            run_log.checkpoint = self.checkpoint_path
        if self.keep_state:
            run_log.agent = self.agent
            run_log.memory = self.memory
        return run_log

    def collect(self, step):
        """
        Act, step the environment and store the transition.
        """
        agent, spec = self.agent, self.env.spec
        with self.timer.phase("acting"):
            if step <= self.config.warmup:
                action = self.rngs["exploration"].uniform(
                    -spec.action_bound, spec.action_bound, (spec.action_dim,)
                )
            else:
                action = agent.act(self.state.observation, self.rngs["exploration"])

        with self.timer.phase("env_stepping"):
            result = self.env.step(self.state, action)
            transition = Transition(
                self.state.observation,
                action,
                result.reward,
                result.next_observation,
                terminal=result.terminal,
                truncated=result.truncated,
            )

        with self.timer.phase("priority"):
            priority = 0.0
            if self.strategy.uses_priorities:
                priority = agent.collection_priority(transition)
                if not np.isfinite(priority):
                    raise DivergenceError(
                        "Collection-time TD error became non-finite.",
                        {"step": step, "priority": priority},
                    )
            self.memory.push(transition, priority)

        with self.timer.phase("env_stepping"):
            if result.done:
                self.state = self.env.reset(self.rngs["env"].seed())
            else:
                self.state = result.state

    def update(self, step):
        """
        One critic update, followed by an actor update
        and soft target updates every ``policy_delay`` critic updates.
        """
        agent, config, run_log = self.agent, self.config, self.run_log
        timer, memory = self.timer, self.memory

        with timer.phase("sampling"):
            batch, meta = self.critic_sampler.sample(
                memory, config.batch, self.rngs["critic_sampling"]
            )
        with timer.phase("forward_backward"):
            targets = agent.compute_targets(batch, self.rngs["smoothing"])
            loss1, loss2, abs_delta = agent.critic_update(batch, targets)
        with timer.phase("priority"):
            self.critic_sampler.update(memory, meta, abs_delta)
            run_log.critic_updates += 1
            record = DiagRecord(
                run_log.critic_updates, step, loss1, loss2, float(np.mean(abs_delta))
            )
            run_log.diagnostics.append(record)

        if run_log.critic_updates % config.policy_delay:
            return

        if self.strategy.is_decoupled:
            with timer.phase("sampling"):
                batches, metas = draw_candidates(
                    memory, self.k, config.batch, self.rngs["actor_sampling"]
                )
            with timer.phase("eta_scoring"):
                candidates = score_candidates(
                    agent.nets.actor,
                    batches,
                    self.reference,
                    config.kl_mode,
                    config.jitter,
                    metas,
                )
                actor_batch = candidates.chosen_batch
                record.chosen_eta = candidates.chosen_eta
                record.chosen_index = candidates.chosen
                record.mu_sq_norm = candidates.mu_sq_norms[candidates.chosen]
                record.mean_sq_dev = candidates.mean_sq_devs[candidates.chosen]
                record.candidate_etas = candidates.etas
        else:
            # fresh draw, its TD errors are never written back
            with timer.phase("sampling"):
                actor_batch, _ = self.critic_sampler.sample(
                    memory, config.batch, self.rngs["actor_sampling"]
                )

        with timer.phase("forward_backward"):
            record.actor_loss = agent.actor_update(actor_batch)
            agent.soft_update()
            run_log.actor_updates += 1

    def evaluate(self, step):
        with self.timer.phase("evaluation"):
            drift = self.memory.tree.ensure_consistent()
            if drift > 0:
                log.debug("Sum tree drift %g at step %d", drift, step)
            mean, std = evaluate(
                self.agent.nets.actor,
                self.env,
                self.config.eval_episodes,
                self.rngs["evaluation"].seed(),
            )
            self.run_log.add_eval(EvalRecord(step, mean, std, self.seed))
        log.info(
            "%s seed %d step %d: return %.2f +- %.2f",
            self.strategy.value,
            self.seed,
            step,
            mean,
            std,
        )


def run_training(config, seed, strategy=None, keep_state=False, checkpoint_path=None):
    """
    Train one agent and return its :class:`RunLog`.

    A numeric failure does not raise; the log is marked ``failed``
    and holds the evaluations made before it.
    """
    return Trainer(
        config,
        seed,
        strategy=strategy,
        keep_state=keep_state,
        checkpoint_path=checkpoint_path,
    ).run()
