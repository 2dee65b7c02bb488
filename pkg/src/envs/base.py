"""
Common environment interface.

An environment is an immutable parameter set that is at the same time the
dynamics model and the cost model of its task, plus the declarations the
memory-augmented controller needs: a value proxy, a goal, a state scale and an
optional map from state directions to control directions.
"""
from abc import abstractmethod
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from ..core.models import CostModel, DynamicsModel
from ..core.types import StateVector
from ..detection.thresholds import DetectionThresholds
from ..mppi.config import MppiConfig


class Environment(DynamicsModel, CostModel):
    """Dynamics, costs and task declarations of one benchmark environment."""

    name: str = "environment"

    @property
    @abstractmethod
    def control_lower(self) -> NDArray[np.float64]:
        """Lower control bound, shape (m,)."""

    @property
    @abstractmethod
    def control_upper(self) -> NDArray[np.float64]:
        """Upper control bound, shape (m,)."""

    @abstractmethod
    def value(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        """Value proxy V_base, vectorized over leading dimensions."""

    def value_gradient(self, x: NDArray[np.float64]) -> Optional[NDArray[np.float64]]:
        """Analytic ∇V_base for a single state, or None to use finite differences."""
        return None

    @property
    def has_value_gradient(self) -> bool:
        return False

    @property
    def goal(self) -> Optional[StateVector]:
        return None

    @property
    def characteristic_scale(self) -> float:
        return 1.0

    @property
    def state_to_control(self) -> Optional[NDArray[np.float64]]:
        """(m, n) map from state directions to control directions, if declared."""
        return None

    def default_control(self) -> NDArray[np.float64]:
        return np.zeros(self.control_dim)

    @abstractmethod
    def initial_state(self, rng: Optional[np.random.Generator] = None) -> StateVector:
        """Start state; randomized when a generator is given and the task is."""

    def trap_states(self) -> NDArray[np.float64]:
        """Predefined start states inside known traps, shape (k, n)."""
        return np.empty((0, self.state_dim))

    def is_success(self, x: NDArray[np.float64]) -> bool:
        return False

    def in_collision(self, x: NDArray[np.float64]) -> bool:
        return False

    def retarget(self, x: NDArray[np.float64]) -> "Environment":
        """Environment for the next control step; tasks with moving targets override."""
        return self

    def terminal_cost(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.stage_cost(x, np.broadcast_to(self.default_control(), x.shape[:-1] + (self.control_dim,)))

    def reward(self, x: NDArray[np.float64], u: NDArray[np.float64]) -> float:
        return -float(self.stage_cost(x, u))

    def clip_control(self, u: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.clip(u, self.control_lower, self.control_upper)

    @abstractmethod
    def default_mppi(self) -> MppiConfig:
        """Per-environment MPPI defaults."""

    @abstractmethod
    def default_detection(self) -> DetectionThresholds:
        """Per-environment detection defaults."""


def softplus_penalty(clearance: NDArray[np.float64], sharpness: float) -> NDArray[np.float64]:
    """max(0, softplus(k·c) − ln 2): zero for c ≤ 0, smooth growth inside."""
    raw = np.logaddexp(0.0, sharpness * clearance) - np.log(2.0)
    return np.maximum(0.0, raw)
