"""
Built-in benchmark environments.
"""
from .base import Environment, softplus_penalty
from .double_well import DoubleWellEnv
from .navigation import PointMassNavEnv, cap_speed
from .pendulum import PendulumEnv, wrap_angle
from .quadrotor import QuadrotorEnv, hat, hover_state, project_rotation
from .registry import (
    DoubleWellConfig,
    EnvironmentConfig,
    NavigationConfig,
    PendulumConfig,
    QuadrotorConfig,
    build_environment,
)
from .scenarios import SCENARIO_FAMILIES, Disc, Scenario, load_scenario, scenario_family, u_trap

__all__ = [
    "SCENARIO_FAMILIES",
    "Disc",
    "DoubleWellConfig",
    "DoubleWellEnv",
    "Environment",
    "EnvironmentConfig",
    "NavigationConfig",
    "PendulumConfig",
    "PendulumEnv",
    "PointMassNavEnv",
    "QuadrotorConfig",
    "QuadrotorEnv",
    "Scenario",
    "build_environment",
    "cap_speed",
    "hat",
    "hover_state",
    "load_scenario",
    "project_rotation",
    "scenario_family",
    "softplus_penalty",
    "u_trap",
    "wrap_angle",
]
