"""
Test configuration and shared fixtures for mamppi tests.
"""
import numpy as np
import pytest

from src.config import get_settings


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for tests that draw random inputs."""
    return np.random.default_rng(12345)


@pytest.fixture
def pendulum_experiment(tmp_path):
    """A short pendulum experiment document writing under ``tmp_path``."""
    return {
        "name": "pendulum-test",
        "environment": {"kind": "pendulum"},
        "preset": "ma-mppi",
        "controller": {"mppi": {"samples": 32, "horizon": 5}},
        "trials": 2,
        "steps": 10,
        "seed_base": 3,
        "output_dir": str(tmp_path / "pendulum-test"),
    }


@pytest.fixture(autouse=True)
def clear_settings_cache():
    """Reload settings from the environment for every test."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
