# -*- coding: utf-8 -*-
from __future__ import absolute_import, print_function, unicode_literals
import enum
import os
import time
from collections import OrderedDict

from .constants import PHASES


class PhaseTimer(object):
    """
    Accumulates wall-clock time spent in named phases of a training run.

    Used as::

        >>> timer = PhaseTimer()
        >>> with timer.phase("sampling"):
        ...     pass
        >>> sorted(timer.totals)[:2]
        ['acting', 'env_stepping']

    Phases must not be nested; each second of the run
    should be attributed to at most one phase so that the
    totals can be compared against :attr:`wall_time`.

    Parameters
    ----------
    phases : iterable, optional
        Phase names to pre-register with zero time.
        By default :data:`dper_lab.constants.PHASES` is used.
    clock : callable, optional
        Monotonic clock returning seconds.
    """

    def __init__(self, phases=PHASES, clock=time.perf_counter):
        self.clock = clock
        self.totals = OrderedDict((name, 0.0) for name in phases)
        self._started = None
        self._stopped = None

    def start(self):
        self._started = self.clock()
        self._stopped = None

    def stop(self):
        self._stopped = self.clock()

    @property
    def wall_time(self):
        """
        Seconds between :meth:`start` and :meth:`stop`
        (or now when the timer is still running).
        """
        if self._started is None:
            return 0.0
        end = self._stopped if self._stopped is not None else self.clock()
        return end - self._started

    @property
    def covered(self):
        """
        Sum of all phase totals.
        """
        return sum(self.totals.values())

    def phase(self, name):
        """
        Context manager adding the time spent in its block to ``name``.
        """
        return _Phase(self, name)


class _Phase(object):
    # entered several times per environment step, so kept cheap
    __slots__ = ("timer", "name", "begin")

    def __init__(self, timer, name):
        self.timer = timer
        self.name = name
        self.begin = None

    def __enter__(self):
        self.begin = self.timer.clock()
        return self

    def __exit__(self, *exc_info):
        totals = self.timer.totals
        totals[self.name] = totals.get(self.name, 0.0) + self.timer.clock() - self.begin
        return False


def dictify(obj):
    """
    Convert any object to a plain dictionary of primitive values.

    If the given object is already an instance of a dict,
    its values are converted. If not, then all the public
    non-callable attributes of the object are used.
    Enum members are replaced by their values so that
    the result can be dumped to YAML or JSON.
    """
    if not isinstance(obj, dict):
        obj = {
            k: getattr(obj, k)
            for k in dir(obj)
            if not k.startswith("_") and not callable(getattr(obj, k))
        }

    def convert(value):
        if isinstance(value, enum.Enum):
            return value.value
        if isinstance(value, (list, tuple)):
            return [convert(i) for i in value]
        if isinstance(value, dict):
            return {k: convert(v) for k, v in value.items()}
        return value

    return {k: convert(v) for k, v in obj.items()}


def setup_django(settings_module="dper_lab.settings"):
    """
    Make sure Django is configured so forms can be used outside of a project.

    Does nothing when settings were already configured,
    for example by ``pytest-django`` or by the caller's own project.
    """
    from django.conf import settings

    if settings.configured:
        return

    os.environ.setdefault("DJANGO_SETTINGS_MODULE", settings_module)

    import django

    django.setup()
