# -*- coding: utf-8 -*-
from __future__ import print_function, unicode_literals
import json
import os

import mock

from dper_lab.harness import cli
from dper_lab.harness.outputs import read_csv, read_window


TINY_FLAGS = [
    "--seeds",
    "1",
    "--steps",
    "40",
    "--warmup",
    "20",
    "--batch",
    "8",
    "--hidden",
    "8",
    "--eval-interval",
    "20",
    "--eval-episodes",
    "1",
]


def last_json(text):
    return json.loads(text.strip().splitlines()[-1])


def read_bytes(path):
    with open(path, "rb") as fid:
        return fid.read()


class TestMain(object):
    def test_train(self, tmpdir, capsys):
        out = str(tmpdir.join("cmp"))

        code = cli.main(["train", "--strategy", "er,dper", "--out", out] + TINY_FLAGS)

        assert code == cli.EXIT_OK
        assert last_json(capsys.readouterr().out) == {"runs": 2, "failed": 0, "out": out}
        assert len(read_csv(os.path.join(out, "timing.csv"))) == 2
        assert os.path.exists(os.path.join(out, "checkpoints", "dper-k2-seed0.ckpt"))

    def test_config_error(self, capsys):
        code = cli.main(["train", "--strategy", "er", "--k", "3"])

        assert code == cli.EXIT_ERROR
        error = last_json(capsys.readouterr().err)
        assert error["error"] == "ConfigError"
        assert "k" in error["details"]["errors"]

    def test_config_file(self, tmpdir, capsys):
        path = tmpdir.join("config.yaml")
        path.write("strategy: er\nsteps: 10\nwarmup: 5\neval_interval: 5\n")

        with mock.patch.object(cli, "run_experiment", return_value=[]) as run:
            code = cli.main(["train", "--config", str(path), "--seeds", "2"])

        assert code == cli.EXIT_OK
        config = run.call_args[0][0]
        assert config.steps == 10
        assert config.seeds == [0, 1]

    def test_unexpected_error(self, capsys):
        with mock.patch.object(cli, "run_experiment", side_effect=RuntimeError("boom")):
            code = cli.main(["train"] + TINY_FLAGS)

        assert code == cli.EXIT_UNEXPECTED
        assert last_json(capsys.readouterr().err)["message"] == "boom"

    def test_ablate_bad_k_values(self, capsys):
        code = cli.main(["ablate-k", "--k-values", "2,2"] + TINY_FLAGS)

        assert code == cli.EXIT_ERROR
        assert "k_values" in last_json(capsys.readouterr().err)["details"]["errors"]

    def test_ablate_and_report(self, tmpdir, capsys):
        out = str(tmpdir.join("k"))

        code = cli.main(["ablate-k", "--k-values", "2,3", "--out", out] + TINY_FLAGS)

        assert code == cli.EXIT_OK
        result = last_json(capsys.readouterr().out)
        assert result["k_values"] == [2, 3]
        assert result["best_k"]["pendulum"] in (2, 3)

        k2 = os.path.join(out, "k2")
        results = [
            os.path.join(out, "ablation.csv"),
            os.path.join(out, "ablation_timing.csv"),
            os.path.join(k2, "evals.csv"),
            os.path.join(k2, "diag.csv"),
            os.path.join(k2, "timing.csv"),
        ]
        before = {path: read_bytes(path) for path in results}
        assert len(read_csv(os.path.join(k2, "diag.csv"))) > 0

        os.remove(os.path.join(out, "summary.txt"))
        assert cli.main(["report", "--in", out]) == cli.EXIT_OK
        assert last_json(capsys.readouterr().out)["k_values"] == [2, 3]
        assert os.path.exists(os.path.join(out, "summary.txt"))

        assert cli.main(["report", "--in", k2, "--window", "2"]) == cli.EXIT_OK
        assert last_json(capsys.readouterr().out) == {"runs": 1, "groups": 1}

        # reports rebuild summaries and plots only
        assert {path: read_bytes(path) for path in results} == before

    def test_report_keeps_training_window(self, tmpdir, capsys):
        out = str(tmpdir.join("run"))
        cli.main(["train", "--strategy", "er", "--out", out, "--window", "3"] + TINY_FLAGS)
        summary = os.path.join(out, "summary.txt")
        written = read_bytes(summary)

        assert read_window(out) == 3
        assert cli.main(["report", "--in", out]) == cli.EXIT_OK
        assert read_bytes(summary) == written

        assert cli.main(["report", "--in", out, "--window", "1"]) == cli.EXIT_OK
        assert read_window(out) == 1

    def test_report_missing(self, tmpdir, capsys):
        assert cli.main(["report", "--in", str(tmpdir)]) == cli.EXIT_ERROR
        assert last_json(capsys.readouterr().err)["error"] == "ConfigError"

    def test_evaluate(self, tmpdir, capsys):
        out = str(tmpdir.join("run"))
        cli.main(["train", "--strategy", "er", "--out", out] + TINY_FLAGS)
        capsys.readouterr()
        checkpoint = os.path.join(out, "checkpoints", "er-k0-seed0.ckpt")

        code = cli.main(["evaluate", "--checkpoint", checkpoint, "--episodes", "2"])

        assert code == cli.EXIT_OK
        result = last_json(capsys.readouterr().out)
        assert set(result) == {"mean_return", "std_return"}
        assert result["mean_return"] <= 0

    def test_evaluate_bad_checkpoint(self, tmpdir, capsys):
        path = tmpdir.join("bad.ckpt")
        path.write_binary(b"garbage")

        assert cli.main(["evaluate", "--checkpoint", str(path)]) == cli.EXIT_ERROR
        assert last_json(capsys.readouterr().err)["error"] == "CheckpointError"
