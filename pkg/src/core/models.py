"""
Dynamics and cost abstractions.

Implementations operate on arrays with arbitrary leading batch dimensions:
``step`` maps (..., n) states and (..., m) controls to (..., n) states and
the cost methods return (...) arrays. Single vectors are the zero-batch case.
"""
from abc import ABC, abstractmethod
import math
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ContractViolation
from .types import StateVector, Trajectory, as_control, as_state


class DynamicsModel(ABC):
    """Deterministic part f of x_{t+1} = f(x_t, u_t) + noise."""

    state_dim: int
    control_dim: int
    dt: float

    @abstractmethod
    def step(self, x: NDArray[np.float64], u: NDArray[np.float64]) -> NDArray[np.float64]:
        """Advance states by one control period.

        Args:
            x: States, shape (..., n)
            u: Controls, shape (..., m)

        Returns:
            Next states, shape (..., n)
        """


class CostModel(ABC):
    """Stage and terminal costs of a control task."""

    @abstractmethod
    def stage_cost(self, x: NDArray[np.float64], u: NDArray[np.float64]) -> NDArray[np.float64]:
        """Immediate cost c(x, u), shape (...)."""

    @abstractmethod
    def terminal_cost(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        """Terminal cost c_T(x), shape (...)."""


def dynamics_step(
    model: DynamicsModel,
    x: ArrayLike,
    u: ArrayLike,
    noise: Optional[ArrayLike] = None,
) -> StateVector:
    """Apply x_{t+1} = f(x_t, u_t) + noise for a single state.

    Args:
        model: Dynamics model
        x: Current state
        u: Control
        noise: Optional additive noise sample

    Returns:
        Next state
    """
    state = as_state(x, model.state_dim)
    control = as_control(u, model.control_dim)
    next_state = np.asarray(model.step(state, control), dtype=np.float64)
    if next_state.shape != (model.state_dim,):
        raise ContractViolation(
            f"dynamics returned shape {next_state.shape}, expected ({model.state_dim},)"
        )
    if noise is not None:
        next_state = next_state + as_state(noise, model.state_dim)
    return next_state


def trajectory_cost(cost: CostModel, traj: Trajectory) -> float:
    """Total cost S(τ) = Σ c(x_t, u_t) + c_T(x_H).

    Non-finite totals are reported as +inf so the rollout is treated as
    infeasible.
    """
    with np.errstate(all="ignore"):
        stage = np.asarray(cost.stage_cost(traj.states[:-1], traj.controls), dtype=np.float64)
        terminal = float(cost.terminal_cost(traj.states[-1]))
        total = float(np.sum(stage)) + terminal
    if not math.isfinite(total):
        return math.inf
    return total
