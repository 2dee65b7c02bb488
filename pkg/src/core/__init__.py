"""
Core domain types, model interfaces and seeded randomness.
"""
from .errors import (
    ConfigurationError,
    ContractViolation,
    DirectionUnavailableError,
    MamppiError,
    NoFeasibleRolloutError,
    NonFiniteEvaluationError,
    UndefinedAngleError,
    WindowUnderfilledError,
)
from .models import CostModel, DynamicsModel, dynamics_step, trajectory_cost
from .noise import NoiseModel, covariance_factor, seeded_gaussian, spawn_streams
from .types import ControlVector, StateVector, Trajectory, as_control, as_state, as_vector

__all__ = [
    "ConfigurationError",
    "ContractViolation",
    "ControlVector",
    "CostModel",
    "DirectionUnavailableError",
    "DynamicsModel",
    "MamppiError",
    "NoFeasibleRolloutError",
    "NoiseModel",
    "NonFiniteEvaluationError",
    "StateVector",
    "Trajectory",
    "UndefinedAngleError",
    "WindowUnderfilledError",
    "as_control",
    "as_state",
    "as_vector",
    "covariance_factor",
    "dynamics_step",
    "seeded_gaussian",
    "spawn_streams",
    "trajectory_cost",
]
