"""Tests for experiment configuration, trial orchestration and recomputation."""
from pathlib import Path
from types import SimpleNamespace

import numpy as np
import pytest
import yaml

from src.bench.config import ExperimentConfig, TrapCriteria, load_experiment, parse_experiment
from src.bench.experiment import (
    episode_seed,
    generate_trap_starts,
    load_logs,
    log_name,
    read_trials,
    recompute,
    run_experiment,
)
from src.controllers.episode import EpisodeLog
from src.core.errors import ConfigurationError
from src.bench.traps import TrapEvent
from src.envs.scenarios import Scenario


def test_experiment_defaults():
    """Test the default protocol."""
    config = ExperimentConfig()
    assert config.trials == 10
    assert config.steps == 400
    assert config.preset == "ma-mppi"
    assert config.trap == TrapCriteria()


def test_invalid_experiment_lists_fields():
    """Test that every offending field is named."""
    with pytest.raises(ConfigurationError) as exc:
        parse_experiment({"trials": 0, "preset": "fancy", "colour": "blue"})
    assert set(exc.value.fields) == {"trials", "preset", "colour"}


def test_invalid_controller_override_names_path():
    """Test that controller overrides are validated against the controller schema."""
    with pytest.raises(ConfigurationError) as exc:
        parse_experiment({"controller": {"mppi": {"samples": 0}}})
    assert exc.value.fields == ["controller.mppi.samples"]


def test_config_hash_ignores_output_dir(pendulum_experiment):
    """Test that the hash tracks result-relevant fields only."""
    a = parse_experiment(pendulum_experiment)
    b = parse_experiment({**pendulum_experiment, "output_dir": "elsewhere"})
    c = parse_experiment({**pendulum_experiment, "seed_base": 4})
    assert a.config_hash() == b.config_hash()
    assert a.config_hash() != c.config_hash()


def test_yaml_round_trip(pendulum_experiment, tmp_path):
    """Test that a written configuration loads back unchanged."""
    config = parse_experiment(pendulum_experiment)
    path = tmp_path / "experiment.yaml"
    path.write_text(config.to_yaml())
    assert load_experiment(path) == config


def test_controller_config_merges_overrides(pendulum_experiment):
    """Test that overrides land on top of the environment defaults."""
    config = parse_experiment({**pendulum_experiment, "memory_preset": "robot"})
    ctrl = config.controller_config(config.build_environment())
    assert ctrl.mppi.samples == 32
    assert ctrl.mppi.horizon == 5
    assert ctrl.mppi.base_temperature == 0.1


def test_episode_seeds():
    """Test the per-episode seed rule."""
    assert episode_seed(7, 0) == 7
    assert episode_seed(7, 1) == episode_seed(7, 1)
    assert episode_seed(7, 1) != episode_seed(7, 2)
    assert log_name(3, 0, 1) == "trial_003.jsonl"
    assert log_name(3, 1, 2) == "trial_003_ep01.jsonl"


def test_run_experiment_writes_results(pendulum_experiment):
    """Test the files of a finished experiment."""
    result = run_experiment(parse_experiment(pendulum_experiment))
    out = result.output_dir
    for name in ("config.yaml", "summary.csv", "trials.csv", "timing.csv"):
        assert (out / name).exists()
    assert sorted(p.name for p in (out / "logs").iterdir()) == ["trial_000.jsonl", "trial_001.jsonl"]
    assert [r.seed for r in result.trials] == [3, 4]
    log = EpisodeLog.load(out / "logs" / "trial_000.jsonl")
    assert log.seed == 3
    assert len(log) == 10
    metrics = {row["metric"] for row in result.summary}
    assert {"cumulative_reward", "trap_frequency", "success_rate"} <= metrics
    assert "escape_rate" not in metrics
    assert "compute_time" not in (out / "summary.csv").read_text()


def test_identical_seeds_identical_summary(pendulum_experiment, tmp_path):
    """Test that re-running a configuration reproduces summary.csv byte for byte."""
    first = run_experiment(parse_experiment(pendulum_experiment))
    second = run_experiment(parse_experiment({**pendulum_experiment, "output_dir": str(tmp_path / "again")}))
    assert first.summary_path.read_bytes() == second.summary_path.read_bytes()


def test_recompute_matches_summary(pendulum_experiment):
    """Test that metrics recomputed from the logs equal the written summary."""
    result = run_experiment(parse_experiment(pendulum_experiment))
    config, trials, summary = recompute(result.output_dir)
    assert config == parse_experiment(pendulum_experiment)
    assert summary == result.summary
    assert [t.cumulative_cost for t in trials] == [t.cumulative_cost for t in result.trials]


def test_recompute_without_logs(tmp_path, pendulum_experiment):
    """Test that an empty result directory is reported."""
    config = parse_experiment(pendulum_experiment)
    (tmp_path / "logs").mkdir()
    (tmp_path / "config.yaml").write_text(config.to_yaml())
    with pytest.raises(ConfigurationError) as exc:
        recompute(tmp_path)
    assert exc.value.fields == ["logs"]


def test_episodes_share_memory(pendulum_experiment):
    """Test multi-episode trials: one log per episode and the memory persisted once."""
    config = parse_experiment({**pendulum_experiment, "trials": 1, "episodes_per_trial": 2})
    result = run_experiment(config)
    grouped = load_logs(result.output_dir / "logs")
    assert list(grouped) == [0]
    assert len(grouped[0]) == 2
    assert grouped[0][0].seed == 3
    assert (result.output_dir / "memory" / "trial_000.json").exists()
    assert result.trials[0].episodes == 2


def test_read_trials_columns(pendulum_experiment):
    """Test the numeric per-trial table."""
    result = run_experiment(parse_experiment(pendulum_experiment))
    columns = read_trials(result.output_dir)
    assert len(columns["cumulative_cost"]) == 2
    assert columns["success"] in ([0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0])
    assert "trial" not in columns


def test_trap_start_requires_declared_states(pendulum_experiment):
    """Test that trap starts fail for environments without any."""
    config = parse_experiment({**pendulum_experiment, "start": "trap"})
    with pytest.raises(ConfigurationError) as exc:
        run_experiment(config)
    assert exc.value.fields == ["start"]


@pytest.mark.integration
def test_generate_trap_starts(tmp_path):
    """Test that trap generation writes a loadable scenario."""
    config = parse_experiment({
        "name": "traps",
        "environment": {"kind": "navigation", "scenario": "u-trap"},
        "preset": "mppi",
        "controller": {"mppi": {"samples": 64, "horizon": 10}},
        "trials": 1,
        "steps": 60,
        "trap": {"threshold_steps": 20},
        "output_dir": str(tmp_path),
    })
    path = generate_trap_starts(config, output=tmp_path / "u_trap.yaml")
    scenario = Scenario.model_validate(yaml.safe_load(path.read_text()))
    assert scenario.name == "u-trap"
    assert np.asarray(scenario.trap_starts).reshape(-1, 2).shape[1] == 2


def test_generate_trap_starts_stops_at_count(tmp_path, mocker):
    """Test that generation keeps distinct entries in seed order and stops once enough are found."""
    entries = iter([(4.0, 0.1), (4.0, 0.1), (4.2, 0.0), (4.4, -0.1), (4.6, 0.0)])

    def fake_episode(env, ctrl, steps, seed, process_noise):
        x, y = next(entries)
        return SimpleNamespace(records=[SimpleNamespace(state=[x, y, 0.0, 0.0])])

    episodes = mocker.patch("src.bench.experiment.run_episode", side_effect=fake_episode)
    mocker.patch(
        "src.bench.experiment.episode_traps",
        return_value=[TrapEvent(entry=0, exit=None, length=50, radius=0.1)],
    )
    config = parse_experiment({
        "name": "traps",
        "environment": {"kind": "navigation", "scenario": "u-trap"},
        "preset": "mppi",
        "trials": 10,
        "output_dir": str(tmp_path),
    })
    path = generate_trap_starts(config, output=tmp_path / "u_trap.yaml", count=3)
    scenario = Scenario.model_validate(yaml.safe_load(path.read_text()))
    assert scenario.trap_starts == [(4.0, 0.1), (4.2, 0.0), (4.4, -0.1)]
    assert episodes.call_count == 4
    with pytest.raises(ConfigurationError):
        generate_trap_starts(config, count=0)


def test_generate_trap_starts_needs_scenario(pendulum_experiment):
    """Test that environments without a scenario are rejected."""
    with pytest.raises(ConfigurationError) as exc:
        generate_trap_starts(parse_experiment(pendulum_experiment))
    assert exc.value.fields == ["environment"]


@pytest.mark.parametrize(
    "path",
    sorted((Path(__file__).resolve().parents[2] / "config" / "experiments").glob("*.yaml")),
    ids=lambda p: p.stem,
)
def test_shipped_experiments_validate(path, monkeypatch):
    """Test that every bundled experiment file loads."""
    monkeypatch.chdir(path.parents[2])
    config = load_experiment(path)
    assert config.name == path.stem
    if config.start == "trap":
        assert config.build_environment().trap_states().shape[0] > 0
