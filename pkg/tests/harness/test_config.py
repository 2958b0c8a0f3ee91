# -*- coding: utf-8 -*-
from __future__ import print_function, unicode_literals

import pytest

from dper_lab.constants import EnvName, KlMode, PrioritySource, ReplayStrategy
from dper_lab.exceptions import ConfigError
from dper_lab.harness import ExperimentConfig, ExperimentConfigForm
from dper_lab.harness.config import DEFAULT_K, DEFAULTS


class TestExperimentConfig(object):
    def test_defaults(self):
        config = ExperimentConfig.from_data()

        assert config.env is EnvName.pendulum
        assert config.strategies == [ReplayStrategy.dper]
        assert config.strategy is ReplayStrategy.dper
        assert config.k == DEFAULT_K
        assert config.seeds == list(range(10))
        assert config.kl_mode is KlMode.full
        assert config.priority_source is PrioritySource.critic1
        assert config.steps == DEFAULTS["steps"]
        assert config.checkpoints is True

    def test_layers(self):
        config = ExperimentConfig.from_data(
            {"steps": 500, "warmup": 50}, {"steps": 800, "warmup": None}
        )

        assert config.steps == 800
        assert config.warmup == 50

    def test_dashed_keys(self):
        config = ExperimentConfig.from_data({"sigma-explore": "0.3", "eval-interval": 10})

        assert config.sigma_explore == 0.3
        assert config.eval_interval == 10

    def test_strategy_list(self):
        config = ExperimentConfig.from_data({"strategy": "er,per,dper-uniform", "k": 4})

        assert config.strategies == [
            ReplayStrategy.er,
            ReplayStrategy.per,
            ReplayStrategy.dper_uniform,
        ]
        assert config.k_for("er") is None
        assert config.k_for(ReplayStrategy.dper_uniform) == 4

    def test_explicit_seeds(self):
        assert ExperimentConfig.from_data({"seeds": "3,7"}).seeds == [3, 7]
        assert ExperimentConfig.from_data({"seeds": [11]}).seeds == [11]

    @pytest.mark.parametrize(
        "data, field",
        [
            ({"strategy": "er", "k": 2}, "k"),
            ({"strategy": "er,per", "k": 3}, "k"),
            ({"k": 0}, "k"),
            ({"steps": 100, "warmup": 200}, "warmup"),
            ({"steps": 100, "eval_interval": 200}, "eval_interval"),
            ({"strategy": "dper", "sigma_explore": 0}, "sigma_explore"),
            ({"strategy": "dper", "batch": 1}, "batch"),
            ({"strategy": "ppo"}, "strategy"),
            ({"strategy": "er,er"}, "strategy"),
            ({"gamma": 0}, "gamma"),
            ({"tau": 1.5}, "tau"),
            ({"alpha": -1}, "alpha"),
            ({"env": "cartpole"}, "env"),
            ({"seeds": "0,0"}, "seeds"),
        ],
    )
    def test_invalid(self, data, field):
        with pytest.raises(ConfigError) as error:
            ExperimentConfig.from_data(data)

        assert field in error.value.errors

    def test_diag_mode_allows_single_row_batches(self):
        config = ExperimentConfig.from_data({"kl_mode": "diag", "batch": 1})

        assert config.batch == 1

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as error:
            ExperimentConfig.from_data({"learning_rate": 1})

        assert "learning_rate" in error.value.errors

    def test_warmup_may_equal_steps(self):
        config = ExperimentConfig.from_data({"steps": 100, "warmup": 100, "eval_interval": 100})

        assert config.warmup == config.steps

    def test_from_file(self, tmpdir):
        path = tmpdir.join("config.yaml")
        path.write("strategy: [er, per]\nseeds: 3\nsteps: 2000\n")

        config = ExperimentConfig.from_file(str(path), {"steps": 3000})

        assert config.strategies == [ReplayStrategy.er, ReplayStrategy.per]
        assert config.seeds == [0, 1, 2]
        assert config.steps == 3000
        assert config.k is None

    @pytest.mark.parametrize("content", ["- 1\n- 2\n", "steps: [1\n"])
    def test_bad_file(self, tmpdir, content):
        path = tmpdir.join("config.yaml")
        path.write(content)

        with pytest.raises(ConfigError):
            ExperimentConfig.from_file(str(path))

    def test_missing_file(self, tmpdir):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_file(str(tmpdir.join("missing.yaml")))

    def test_replace(self):
        config = ExperimentConfig.from_data({"seeds": "4,5", "steps": 500})
        changed = config.replace(k=5, out="runs/k5")

        assert changed.k == 5
        assert changed.out == "runs/k5"
        assert changed.seeds == [4, 5]
        assert changed.steps == 500
        assert config.k == DEFAULT_K

    def test_replace_coupled(self):
        config = ExperimentConfig.from_data({"strategy": "er"})

        assert config.replace(steps=1000).k is None

    def test_td3_config(self):
        td3 = ExperimentConfig.from_data({"batch": 32, "hidden": 16}).td3_config()

        assert td3.batch_size == 32
        assert td3.hidden == 16
        assert td3.gamma == DEFAULTS["gamma"]


class TestExperimentConfigForm(object):
    def test_k_defaults_for_decoupled(self):
        data = dict(DEFAULTS, strategy="er,dper")
        form = ExperimentConfigForm(data=data)

        assert form.is_valid(), form.errors
        assert form.cleaned_data["k"] == DEFAULT_K
