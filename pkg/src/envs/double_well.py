"""
Planar double-well landscape with direct velocity control.

V(x, y) = (x² − 1)² + y² + tilt · x has minima near (±1, 0) separated by a
ridge at x = 0. With tilt < 0 the right well is the global minimum.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from ..core.types import StateVector
from ..detection.thresholds import DetectionThresholds
from ..mppi.config import MppiConfig
from .base import Environment


@dataclass(frozen=True)
class DoubleWellEnv(Environment):
    """Single integrator on a double-well value landscape."""
    dt: float = 0.05
    max_speed: float = 2.0
    tilt: float = 0.0
    control_weight: float = 0.01
    start: tuple = (-1.0, 0.0)

    name = "double-well"
    state_dim = 2
    control_dim = 2

    @property
    def control_lower(self) -> NDArray[np.float64]:
        return np.full(2, -self.max_speed)

    @property
    def control_upper(self) -> NDArray[np.float64]:
        return np.full(2, self.max_speed)

    def step(self, x: NDArray[np.float64], u: NDArray[np.float64]) -> NDArray[np.float64]:
        return x + np.clip(u, -self.max_speed, self.max_speed) * self.dt

    def value(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=np.float64)
        return (x[..., 0] ** 2 - 1.0) ** 2 + x[..., 1] ** 2 + self.tilt * x[..., 0]

    @property
    def has_value_gradient(self) -> bool:
        return True

    def value_gradient(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=np.float64)
        return np.array([4.0 * x[0] * (x[0] ** 2 - 1.0) + self.tilt, 2.0 * x[1]])

    def stage_cost(self, x: NDArray[np.float64], u: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.value(x) + self.control_weight * np.sum(u ** 2, axis=-1)

    def terminal_cost(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.value(x)

    @property
    def goal(self) -> StateVector:
        return np.array([1.0, 0.0])

    @property
    def state_to_control(self) -> NDArray[np.float64]:
        return np.eye(2)

    def initial_state(self, rng: Optional[np.random.Generator] = None) -> StateVector:
        start = np.asarray(self.start, dtype=np.float64)
        if rng is not None:
            start = start + rng.normal(0.0, 0.05, size=2)
        return start

    def is_success(self, x: NDArray[np.float64]) -> bool:
        return float(np.linalg.norm(np.asarray(x) - self.goal)) < 0.2

    def default_mppi(self) -> MppiConfig:
        return MppiConfig(
            samples=500,
            horizon=20,
            base_temperature=0.1,
            control_covariance=[[0.5, 0.0], [0.0, 0.5]],
            control_lower=[-self.max_speed] * 2,
            control_upper=[self.max_speed] * 2,
        )

    def default_detection(self) -> DetectionThresholds:
        return DetectionThresholds(variance_threshold=0.001, gradient_threshold=0.05)
