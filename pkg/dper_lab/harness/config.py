# -*- coding: utf-8 -*-
"""
Experiment configuration.

Values are layered ``DEFAULTS < config file < command-line flags`` and the
merged mapping is cleaned by :class:`ExperimentConfigForm`, exactly like a
Django form cleans a query string.
"""
from __future__ import absolute_import, print_function, unicode_literals
import io
import logging
from collections import OrderedDict

import yaml
from django import forms

from ..constants import EnvName, KlMode, PrioritySource, ReplayStrategy
from ..exceptions import ConfigError
from ..fields import MultipleValuesField, SeedsField
from ..td3_agent import Td3Config
from ..utils import dictify, setup_django
from ..validators import FiniteValidator, OpenLowerBoundValidator


log = logging.getLogger(__name__)

DEFAULT_K = 2

DEFAULTS = OrderedDict(
    [
        ("env", EnvName.pendulum.value),
        ("strategy", ReplayStrategy.dper.value),
        ("seeds", 10),
        ("steps", 50000),
        ("warmup", 1000),
        ("capacity", 100000),
        ("alpha", 0.6),
        ("priority_eps", 1e-3),
        ("kl_mode", KlMode.full.value),
        ("jitter", 1e-6),
        ("batch", 256),
        ("policy_delay", 2),
        ("tau", 0.005),
        ("gamma", 0.99),
        ("sigma_smooth", 0.2),
        ("smooth_clip", 0.5),
        ("sigma_explore", 0.1),
        ("priority_source", PrioritySource.critic1.value),
        ("eval_interval", 1000),
        ("eval_episodes", 10),
        ("window", 5),
        ("hidden", 256),
        ("lr_actor", 3e-4),
        ("lr_critic", 3e-4),
        ("workers", 1),
        ("timing_exclusive", False),
        ("checkpoints", True),
        ("out", ""),
    ]
)
"""
Desk-scale defaults. Full scale is ``steps=1000000``, ``warmup=25000``,
``capacity=1000000`` and ``window=100``.
"""


def _choices(enum_class):
    return [(i.value, i.value) for i in enum_class]


def _rate_field():
    return forms.FloatField(
        max_value=1, validators=[OpenLowerBoundValidator(0), FiniteValidator()]
    )


def _scale_field(**kwargs):
    return forms.FloatField(min_value=0, validators=[FiniteValidator()], **kwargs)


class ExperimentConfigForm(forms.Form):
    """
    Validates one merged experiment configuration.

    ``k`` may only be given when at least one selected strategy
    is a decoupled one; those strategies default to ``K = 2``.
    """

    env = forms.ChoiceField(choices=_choices(EnvName))
    strategy = MultipleValuesField(
        child=forms.ChoiceField(choices=_choices(ReplayStrategy)), unique=True
    )
    k = forms.IntegerField(min_value=1, required=False)
    seeds = SeedsField()
    steps = forms.IntegerField(min_value=1)
    warmup = forms.IntegerField(min_value=0)
    capacity = forms.IntegerField(min_value=1)
    alpha = _scale_field()
    priority_eps = _scale_field()
    kl_mode = forms.ChoiceField(choices=_choices(KlMode))
    jitter = _scale_field()
    batch = forms.IntegerField(min_value=1)
    policy_delay = forms.IntegerField(min_value=1)
    tau = _rate_field()
    gamma = _rate_field()
    sigma_smooth = _scale_field()
    smooth_clip = _scale_field()
    sigma_explore = _scale_field()
    priority_source = forms.ChoiceField(choices=_choices(PrioritySource))
    eval_interval = forms.IntegerField(min_value=1)
    eval_episodes = forms.IntegerField(min_value=1)
    window = forms.IntegerField(min_value=1)
    hidden = forms.IntegerField(min_value=1)
    lr_actor = _scale_field()
    lr_critic = _scale_field()
    workers = forms.IntegerField(min_value=1)
    timing_exclusive = forms.BooleanField(required=False)
    checkpoints = forms.BooleanField(required=False)
    out = forms.CharField(required=False)

    def clean_env(self):
        return EnvName(self.cleaned_data["env"])

    def clean_strategy(self):
        return [ReplayStrategy(i) for i in self.cleaned_data["strategy"]]

    def clean_kl_mode(self):
        return KlMode(self.cleaned_data["kl_mode"])

    def clean_priority_source(self):
        return PrioritySource(self.cleaned_data["priority_source"])

    def clean(self):
        data = super(ExperimentConfigForm, self).clean()
        strategies = data.get("strategy") or []
        decoupled = any(s.is_decoupled for s in strategies)
        steps = data.get("steps")

        if strategies and not decoupled and data.get("k") is not None:
            self.add_error(
                "k",
                "K only applies to the dper and dper-uniform strategies, "
                "not to {}.".format(", ".join(s.value for s in strategies)),
            )
        if decoupled and data.get("k") is None:
            data["k"] = DEFAULT_K

        if steps is not None:
            if data.get("warmup") is not None and data["warmup"] > steps:
                self.add_error("warmup", "Warmup cannot exceed the {} steps.".format(steps))
            if data.get("eval_interval") is not None and data["eval_interval"] > steps:
                self.add_error(
                    "eval_interval",
                    "Evaluation interval cannot exceed the {} steps.".format(steps),
                )

        if decoupled:
            if data.get("sigma_explore") == 0:
                self.add_error(
                    "sigma_explore",
                    "Exploration noise must be positive to score actor batches.",
                )
            if data.get("kl_mode") is KlMode.full and data.get("batch", 2) < 2:
                self.add_error(
                    "batch", "A full covariance needs batches of at least 2."
                )

        return data


class ExperimentConfig(object):
    """
    Validated experiment configuration.

    Every field of :class:`ExperimentConfigForm` is an attribute, except
    ``strategy`` which becomes the list :attr:`strategies`.
    """

    def __init__(self, cleaned_data):
        data = dict(cleaned_data)
        self.strategies = data.pop("strategy")
        for name, value in data.items():
            setattr(self, name, value)

    @classmethod
    def from_data(cls, *layers):
        """
        Merge ``layers`` over :data:`DEFAULTS` and validate.

        Later layers win. Keys may be spelled with dashes as on the command
        line and ``None`` values are ignored so unset flags do not
        mask file values.

        Raises
        ------
        ConfigError
            With the form's error dict when anything does not validate
        """
        setup_django()

        data = dict(DEFAULTS)
        unknown = []
        for layer in layers:
            for key, value in (layer or {}).items():
                key = key.replace("-", "_")
                if key not in ExperimentConfigForm.base_fields:
                    unknown.append(key)
                elif value is not None:
                    data[key] = value
        if unknown:
            raise ConfigError(
                {key: ["Unknown configuration key."] for key in sorted(set(unknown))}
            )

        form = ExperimentConfigForm(data=data)
        if not form.is_valid():
            raise ConfigError(
                {k: [str(e) for e in v] for k, v in form.errors.items()}
            )
        return cls(form.cleaned_data)

    @classmethod
    def from_file(cls, path, *layers):
        """
        Load a YAML mapping and use it as the first layer over the defaults.
        """
        try:
            with io.open(path, "r", encoding="utf-8") as fid:
                loaded = yaml.safe_load(fid) or {}
        except (IOError, OSError) as e:
            raise ConfigError({"config": ["Cannot read {}: {}".format(path, e)]})
        except yaml.YAMLError as e:
            raise ConfigError({"config": ["{} is not valid YAML: {}".format(path, e)]})
        if not isinstance(loaded, dict):
            raise ConfigError({"config": ["{} must hold a mapping.".format(path)]})
        log.debug("Loaded configuration file %s", path)
        return cls.from_data(loaded, *layers)

    def __repr__(self):
        return "<ExperimentConfig env={} strategies={} k={} seeds={} steps={}>".format(
            self.env.value,
            ",".join(s.value for s in self.strategies),
            self.k,
            self.seeds,
            self.steps,
        )

    @property
    def strategy(self):
        """
        The first selected strategy.
        """
        return self.strategies[0]

    def k_for(self, strategy):
        """
        ``K`` used by ``strategy``, ``None`` for coupled strategies.
        """
        return self.k if ReplayStrategy(strategy).is_decoupled else None

    def as_data(self):
        """
        Plain mapping accepted back by :meth:`from_data`.
        """
        data = dictify({k: v for k, v in vars(self).items() if k != "strategies"})
        data["strategy"] = [s.value for s in self.strategies]
        if not any(s.is_decoupled for s in self.strategies):
            data.pop("k", None)
        return data

    def replace(self, **changes):
        """
        Copy with some fields changed, validated again.
        """
        return self.__class__.from_data(self.as_data(), changes)

    def td3_config(self):
        return Td3Config(
            gamma=self.gamma,
            tau=self.tau,
            policy_delay=self.policy_delay,
            sigma_smooth=self.sigma_smooth,
            smooth_clip=self.smooth_clip,
            sigma_explore=self.sigma_explore,
            batch_size=self.batch,
            hidden=self.hidden,
            lr_actor=self.lr_actor,
            lr_critic=self.lr_critic,
            priority_source=self.priority_source,
        )
