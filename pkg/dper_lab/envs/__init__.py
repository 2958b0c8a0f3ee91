# -*- coding: utf-8 -*-
from __future__ import absolute_import, print_function, unicode_literals

from ..constants import EnvName
from .base import BaseEnv, EnvSpec, EnvState, StepResult  # noqa
from .pendulum import PendulumEnv
from .reacher import PointReacherEnv


ENVIRONMENTS = {EnvName.pendulum: PendulumEnv, EnvName.reacher: PointReacherEnv}


def get_env(name, **kwargs):
    """
    Instantiate an environment by its command-line name.
    """
    return ENVIRONMENTS[EnvName(name)](**kwargs)
