import json

import numpy as np
import pytest
import yaml

from qrbfnn.cli import main
from qrbfnn.experiments import (ConfigError, ExperimentConfig, RunReport, Variant, build_trials, compare_variants,
                                iterations_to_threshold, run_experiment, smoothed, steady_state)
from qrbfnn.presets import get_preset, preset_names
from qrbfnn.qlearn import TrainConfig
from qrbfnn.report import csv_lines, dump_config, emit_report, load_config


def small(name, trials=3, **changes):
    cfg = get_preset(name)
    return cfg.replace(train=TrainConfig(mu=cfg.train.mu, epochs=min(cfg.train.epochs, 2), trials=trials),
                       **changes)


def empty_report():
    return RunReport({"experiment": "system-id", "name": "x"}, np.empty(0), np.empty(0), np.nan, np.nan, 0.0,
                     None, [], np.zeros(0, bool), 0, np.zeros((0, 0)), np.zeros(0))


class TestConfig:
    def test_unknown_experiment(self):
        with pytest.raises(ConfigError):
            ExperimentConfig("nope")

    def test_unknown_variant(self):
        with pytest.raises(ConfigError):
            Variant("gradient")

    def test_unknown_task_key(self):
        with pytest.raises(ConfigError):
            ExperimentConfig("system-id", task={"snr": 3})

    def test_adaptive_analysis_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig("analysis-validation", Variant("adaptive"))

    def test_round_trip(self):
        cfg = get_preset("mimo")
        again = ExperimentConfig.from_dict(yaml.safe_load(dump_config(cfg)))
        assert again.to_dict() == cfg.to_dict()

    def test_presets_carry_benchmark_settings(self):
        sid = get_preset("system-id")
        assert (sid.neurons, sid.spread, sid.train.trials) == (6, 1.0, 100)
        assert (sid.variant.beta, sid.variant.gamma, sid.variant.q_max) == (0.9, 5.0, 5.0)
        mimo = get_preset("mimo")
        assert (mimo.variant.beta, mimo.variant.gamma, mimo.variant.q_max) == (1.0, 10.0, 10.0)
        mg = get_preset("mackey-glass").task_settings()
        assert (mg["train_start"], mg["train_stop"], mg["test_stop"], mg["snr_db"]) == (100, 2500, 3000, 30.0)
        assert get_preset("mackey-glass").train.epochs == 100

    def test_every_preset_builds(self):
        for name in preset_names():
            assert get_preset(name).experiment


class TestMetrics:
    def test_smoothing(self):
        np.testing.assert_allclose(smoothed([1.0, 3.0, 5.0, 7.0], 2), [1.0, 2.0, 4.0, 6.0])

    def test_threshold(self):
        curve = 10.0 ** (-np.arange(10) / 10)  # 0, -1, -2, ... dB
        assert iterations_to_threshold(curve, -4.0, window=1) == 5
        assert iterations_to_threshold(curve, -40.0, window=1) is None

    def test_steady_state(self):
        assert steady_state(np.r_[np.ones(90), np.full(10, 3.0)]) == 3.0

    def test_pure_noise_reports_its_variance(self):
        # a network that cannot fit anything leaves the noise as residual
        cfg = ExperimentConfig("classification", Variant("baseline"), neurons=2, spread=0.1,
                               train=TrainConfig(mu=1e-12, epochs=1, trials=20),
                               task={"snr_db": 0.0})
        rep = run_experiment(cfg)
        # unit-power signal plus unit-variance noise
        assert rep.final_train_mse_db == pytest.approx(10 * np.log10(2.0), abs=0.5)


class TestRunner:
    @pytest.mark.parametrize("name", ["system-id", "mimo", "hammerstein", "mackey-glass", "classification",
                                      "sensitivity-q2", "analysis-validation-q2"])
    def test_shapes(self, name):
        cfg = small(name)
        rep = run_experiment(cfg)
        T = build_trials(cfg)[0].train_desired.shape[0]
        assert rep.mse.shape == rep.mean_q.shape == (cfg.train.epochs * T,)
        assert np.all(np.isfinite(rep.mse))
        assert rep.epoch_mse.shape == (3, cfg.train.epochs)
        assert len(rep.trial_seeds) == 3

    def test_seed_changes_data(self):
        a = run_experiment(small("system-id"))
        b = run_experiment(small("system-id").replace(train=TrainConfig(mu=1e-2, seed=1, trials=3)))
        assert not np.array_equal(a.mse, b.mse)

    def test_trial_independence(self):
        # trial k uses the same randomness whatever the trial count
        a = build_trials(small("system-id", trials=2))
        b = build_trials(small("system-id", trials=5))
        np.testing.assert_array_equal(a[1].train_inputs, b[1].train_inputs)

    def test_divergence_is_reported(self):
        cfg = small("sensitivity-q12").replace(train=TrainConfig(mu=50.0, epochs=2, trials=3))
        rep = run_experiment(cfg)
        assert rep.n_diverged == 3
        assert np.isnan(rep.mse[-1])

    def test_adaptive_trace(self):
        rep = run_experiment(small("system-id"))
        assert rep.mean_q[0] == 1.0
        assert rep.mean_q.max() <= 5.0


class TestCompare:
    def test_common_random_numbers(self):
        seen = {}

        def hook(trial, name, noise):
            seen.setdefault((trial, name), []).append(noise.copy())

        compare_variants([small("system-id"), small("system-id-baseline")], noise_hook=hook)
        assert seen
        for draws in seen.values():
            assert len(draws) == 2
            np.testing.assert_array_equal(draws[0], draws[1])

    def test_single_config(self):
        cfg = small("system-id")
        table = compare_variants([cfg])
        assert len(table.rows()) == 1
        np.testing.assert_array_equal(table.reports[0].mse, run_experiment(cfg).mse)

    def test_mismatched_experiments(self):
        with pytest.raises(ConfigError):
            compare_variants([small("system-id"), small("mimo")])

    def test_mismatched_seeds(self):
        other = small("system-id-baseline").replace(train=TrainConfig(mu=1e-2, seed=9, trials=3))
        with pytest.raises(ConfigError):
            compare_variants([small("system-id"), other])


class TestReport:
    def test_empty_trace(self):
        assert csv_lines(empty_report()) == ["iteration,mse_db,mean_q"]

    def test_three_iterations(self, tmp_path):
        rep = empty_report()
        rep.mse = np.array([1.0, 0.1, 0.01])
        rep.mean_q = np.array([1.0, 2.0, 3.0])
        path, summary = emit_report(rep, tmp_path / "r.csv")
        lines = path.read_text().splitlines()
        assert len(lines) == 4
        assert lines[2] == "2,-10,2"
        assert json.loads(summary.read_text())["iterations"] == 3

    def test_analysis_columns(self, tmp_path):
        rep = run_experiment(small("analysis-validation-q2"))
        path, _ = emit_report(rep, tmp_path / "a.csv")
        assert path.read_text().splitlines()[0] == "iteration,mse_db,mean_q,mae_simulated,mae_analytic"

    def test_byte_identical(self, tmp_path):
        a, _ = emit_report(run_experiment(small("mimo")), tmp_path / "a.csv")
        b, _ = emit_report(run_experiment(small("mimo")), tmp_path / "b.csv")
        assert a.read_bytes() == b.read_bytes()

    def test_config_from_yaml(self, tmp_path):
        f = tmp_path / "c.yaml"
        f.write_text("preset: system-id\ntrain: {trials: 4}\ntask: {train_snr_db: 10}\n")
        cfg = load_config(f)
        assert cfg.train.trials == 4 and cfg.train.mu == 1e-2
        assert cfg.task_settings()["train_snr_db"] == 10

    def test_bad_yaml(self, tmp_path):
        f = tmp_path / "c.yaml"
        f.write_text("experiment: system-id\nwidth: 3\n")
        with pytest.raises(ConfigError):
            load_config(f)


class TestCli:
    def test_list(self, capsys):
        assert main(["list-presets"]) == 0
        assert "system-id" in capsys.readouterr().out

    def test_run(self, tmp_path):
        assert main(["run", "system-id", "--trials", "2", "--out", str(tmp_path)]) == 0
        assert (tmp_path / "system-id.csv").exists()
        assert (tmp_path / "system-id.summary.json").exists()

    def test_run_config_file(self, tmp_path):
        f = tmp_path / "mine.yaml"
        f.write_text("preset: mimo\nname: mine\n")
        assert main(["run", str(f), "--trials", "2", "--out", str(tmp_path)]) == 0
        assert (tmp_path / "mine.csv").exists()

    def test_compare(self, tmp_path, capsys):
        assert main(["compare", "system-id", "system-id-baseline", "--trials", "2", "--out", str(tmp_path)]) == 0
        assert "system-id-baseline" in capsys.readouterr().out

    def test_config_errors(self, tmp_path):
        assert main(["run", "no-such-preset", "--out", str(tmp_path)]) != 0
        assert main(["run", "system-id", "--trials", "0", "--out", str(tmp_path)]) != 0
        bad = tmp_path / "bad.yaml"
        bad.write_text("experiment: nope\n")
        assert main(["run", str(bad), "--out", str(tmp_path)]) != 0
