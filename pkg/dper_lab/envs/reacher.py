# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function, unicode_literals

import numpy as np

from .base import BaseEnv, EnvSpec


class PointReacherEnv(BaseEnv):
    """
    Point mass in the ``[-arena, arena]^2`` box pushed towards a fixed goal.

    Observation is ``[x, y, x_dot, y_dot]`` and the action is a
    2-D acceleration. Velocity is updated first and position follows
    with the new velocity; hitting a wall stops motion along that axis.
    The reward is the negative distance to the goal after the tick.
    Reaching the goal (closer than ``goal_radius`` while slower than
    ``stop_speed``) ends the episode as terminal.
    """

    name = "reacher"

    def __init__(
        self,
        dt=0.1,
        arena=1.0,
        goal=(0.5, 0.5),
        max_speed=1.0,
        goal_radius=0.05,
        stop_speed=0.05,
        max_episode_steps=150,
    ):
        self.dt = dt
        self.arena = arena
        self.goal = np.asarray(goal, dtype=np.float64)
        self.max_speed = max_speed
        self.goal_radius = goal_radius
        self.stop_speed = stop_speed
        self.max_episode_steps = max_episode_steps

    def get_spec(self):
        return EnvSpec(4, 2, 1.0, self.max_episode_steps)

    def initial_physics(self, generator):
        position = generator.uniform(-self.arena, self.arena, 2)
        return np.concatenate([position, np.zeros(2)])

    def observe(self, physics):
        return physics.copy()

    def advance(self, physics, action):
        position, velocity = physics[:2], physics[2:]

        velocity = np.clip(velocity + action * self.dt, -self.max_speed, self.max_speed)
        position = position + velocity * self.dt

        hit = np.abs(position) > self.arena
        position = np.clip(position, -self.arena, self.arena)
        velocity = np.where(hit, 0.0, velocity)

        distance = np.linalg.norm(position - self.goal)
        terminal = bool(
            distance < self.goal_radius and np.linalg.norm(velocity) < self.stop_speed
        )

        return np.concatenate([position, velocity]), -distance, terminal
