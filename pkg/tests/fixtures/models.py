"""
Small analytic dynamics and cost models for unit tests.
"""
from dataclasses import dataclass

import numpy as np

from src.core.models import CostModel, DynamicsModel


@dataclass(frozen=True)
class IdentityModel(DynamicsModel):
    """f(x, u) = x."""
    state_dim: int = 2
    control_dim: int = 1
    dt: float = 0.1

    def step(self, x, u):
        return np.array(x, dtype=np.float64, copy=True)


@dataclass(frozen=True)
class IntegratorModel(DynamicsModel):
    """f(x, u) = x + u · dt with n = m."""
    state_dim: int = 2
    control_dim: int = 2
    dt: float = 0.1

    def step(self, x, u):
        return x + u * self.dt


@dataclass(frozen=True)
class ConstantCost(CostModel):
    """Stage and terminal costs that ignore their arguments."""
    stage: float = 0.0
    terminal: float = 0.0

    def stage_cost(self, x, u):
        return np.full(np.shape(x)[:-1], self.stage)

    def terminal_cost(self, x):
        return np.full(np.shape(x)[:-1], self.terminal)


@dataclass(frozen=True)
class QuadraticCost(CostModel):
    """c(x, u) = ‖x‖² + w ‖u‖², c_T(x) = ‖x‖²."""
    control_weight: float = 0.0

    def stage_cost(self, x, u):
        return np.sum(x ** 2, axis=-1) + self.control_weight * np.sum(u ** 2, axis=-1)

    def terminal_cost(self, x):
        return np.sum(x ** 2, axis=-1)


@dataclass(frozen=True)
class ExplodingCost(CostModel):
    """Infinite stage cost wherever the first state coordinate exceeds a limit."""
    limit: float = 1.0

    def stage_cost(self, x, u):
        return np.where(x[..., 0] > self.limit, np.inf, np.sum(x ** 2, axis=-1))

    def terminal_cost(self, x):
        return np.sum(x ** 2, axis=-1)
