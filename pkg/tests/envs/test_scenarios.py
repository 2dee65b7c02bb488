"""Tests for obstacle scenarios and environment construction."""
import numpy as np
import pytest
import yaml
from pydantic import TypeAdapter

from src.core.errors import ConfigurationError
from src.envs.double_well import DoubleWellEnv
from src.envs.navigation import PointMassNavEnv
from src.envs.pendulum import PendulumEnv
from src.envs.quadrotor import QuadrotorEnv
from src.envs.registry import EnvironmentConfig, NavigationConfig, QuadrotorConfig, build_environment
from src.envs.scenarios import SCENARIO_FAMILIES, load_scenario, scenario_family, u_trap, wall


def test_families():
    """Test every built-in family."""
    assert set(SCENARIO_FAMILIES) == {"open-field", "single-cylinder", "cylinder-corridor", "u-trap", "slalom"}
    assert scenario_family("open-field").obstacles == []
    assert len(scenario_family("cylinder-corridor").obstacles) == 6
    assert scenario_family("slalom").waypoints
    with pytest.raises(ConfigurationError) as exc:
        scenario_family("maze")
    assert exc.value.fields == ["family"]


def test_wall_discs():
    """Test the disc chain of a wall segment."""
    discs = wall((0.0, 0.0), (1.0, 0.0))
    assert discs[0].center == (0.0, 0.0)
    assert discs[-1].center == (1.0, 0.0)
    gaps = np.diff([d.center[0] for d in discs])
    assert np.all(gaps <= 0.25 + 1e-12)


def test_u_trap_geometry():
    """Test that the U opens toward −x."""
    centers = np.array([d.center for d in u_trap()])
    assert centers[:, 0].max() == pytest.approx(6.0)
    assert centers[:, 0].min() == pytest.approx(3.0)
    assert np.abs(centers[:, 1]).max() == pytest.approx(2.5)
    # nothing blocks the mouth
    mouth = centers[(centers[:, 0] < 3.5) & (np.abs(centers[:, 1]) < 2.0)]
    assert mouth.size == 0


def test_load_scenario_file(tmp_path):
    """Test a scenario file naming only its family."""
    path = tmp_path / "trap.yaml"
    path.write_text(yaml.safe_dump({"name": "my-trap", "family": "u-trap", "goal": [12.0, 0.0]}))
    scenario = load_scenario(path)
    assert scenario.name == "my-trap"
    assert scenario.goal == (12.0, 0.0)
    assert len(scenario.obstacles) == len(u_trap())
    assert scenario.trap_probe == (4.5, 0.0)


def test_declared_trap_starts_override_family(tmp_path):
    """Test that recorded trap starts replace the family placeholders."""
    path = tmp_path / "recorded.yaml"
    starts = [[4.1, 0.2], [4.3, -0.1]]
    path.write_text(yaml.safe_dump({"name": "recorded", "family": "u-trap", "trap_starts": starts}))
    assert load_scenario(path).trap_starts == [(4.1, 0.2), (4.3, -0.1)]
    assert load_scenario(tmp_path / "recorded.yaml").trap_starts != scenario_family("u-trap").trap_starts


def test_load_scenario_explicit_obstacles(tmp_path):
    """Test a scenario with listed obstacles."""
    path = tmp_path / "discs.yaml"
    path.write_text(yaml.safe_dump({"name": "two", "obstacles": [
        {"center": [1.0, 1.0], "radius": 0.5},
        {"center": [2.0, -1.0], "radius": 0.3},
    ]}))
    scenario = load_scenario(path)
    np.testing.assert_array_equal(scenario.radii, [0.5, 0.3])
    assert load_scenario("slalom") == scenario_family("slalom")


def test_load_scenario_errors(tmp_path):
    """Test missing files and invalid documents."""
    with pytest.raises(ConfigurationError):
        load_scenario(tmp_path / "missing.yaml")
    path = tmp_path / "bad.yaml"
    path.write_text(yaml.safe_dump({"name": "bad", "obstacles": [{"center": [0.0, 0.0], "radius": -1.0}], "walls": 3}))
    with pytest.raises(ConfigurationError) as exc:
        load_scenario(path)
    assert "walls" in exc.value.fields
    assert "obstacles.0.radius" in exc.value.fields


def test_build_environment():
    """Test construction from each configuration kind."""
    adapter = TypeAdapter(EnvironmentConfig)
    assert isinstance(build_environment(), PendulumEnv)
    assert isinstance(build_environment(adapter.validate_python({"kind": "pendulum", "dt": 0.01})), PendulumEnv)
    nav = build_environment(adapter.validate_python({"kind": "navigation", "scenario": "slalom"}))
    assert isinstance(nav, PointMassNavEnv)
    assert nav.scenario.name == "slalom"
    quad = build_environment(QuadrotorConfig(drag=0.0))
    assert isinstance(quad, QuadrotorEnv)
    assert quad.drag == 0.0
    well = build_environment(adapter.validate_python({"kind": "double-well", "tilt": -0.1}))
    assert isinstance(well, DoubleWellEnv)
    assert well.tilt == -0.1


def test_environment_config_rejects_unknown_fields():
    """Test that environment documents are strict."""
    with pytest.raises(ValueError):
        NavigationConfig(scenario="u-trap", friction=0.1)
    with pytest.raises(ValueError):
        TypeAdapter(EnvironmentConfig).validate_python({"kind": "submarine"})
