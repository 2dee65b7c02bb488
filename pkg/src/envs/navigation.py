"""
Planar point-mass navigation among disc obstacles.

State (p_x, p_y, v_x, v_y), control is an acceleration. Velocity is capped
in norm and integrated with semi-implicit Euler.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from ..core.types import StateVector
from ..detection.thresholds import DetectionThresholds
from ..mppi.config import MppiConfig
from .base import Environment, softplus_penalty
from .scenarios import Scenario, scenario_family


def cap_speed(v: NDArray[np.float64], max_speed: float) -> NDArray[np.float64]:
    """Scale velocities with ‖v‖ > max_speed back onto the limit."""
    speed = np.linalg.norm(v, axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(speed > max_speed, max_speed / speed, 1.0)
    return v * scale


@dataclass(frozen=True, eq=False)
class PointMassNavEnv(Environment):
    """Double-integrator robot driving to a planar goal."""
    scenario: Scenario = field(default_factory=lambda: scenario_family("u-trap"))
    dt: float = 0.1
    max_speed: float = 2.0
    max_accel: float = 2.0
    goal_weight: float = 1.0
    control_weight: float = 0.01
    obstacle_weight: float = 100.0
    inflation: float = 0.3
    sharpness: float = 5.0
    goal_tolerance: float = 0.5

    name = "navigation"
    state_dim = 4
    control_dim = 2

    def __post_init__(self) -> None:
        object.__setattr__(self, "_centers", self.scenario.centers)
        object.__setattr__(self, "_radii", self.scenario.radii)

    @property
    def control_lower(self) -> NDArray[np.float64]:
        return np.full(2, -self.max_accel)

    @property
    def control_upper(self) -> NDArray[np.float64]:
        return np.full(2, self.max_accel)

    @property
    def goal_position(self) -> NDArray[np.float64]:
        return np.asarray(self.scenario.goal, dtype=np.float64)

    def step(self, x: NDArray[np.float64], u: NDArray[np.float64]) -> NDArray[np.float64]:
        a = np.clip(u, -self.max_accel, self.max_accel)
        v = cap_speed(x[..., 2:4] + a * self.dt, self.max_speed)
        p = x[..., 0:2] + v * self.dt
        return np.concatenate([p, v], axis=-1)

    def obstacle_distances(self, p: NDArray[np.float64]) -> NDArray[np.float64]:
        """Distances from positions (..., 2) to every obstacle center, shape (..., N)."""
        return np.linalg.norm(p[..., np.newaxis, :] - self._centers, axis=-1)

    def obstacle_penalty(self, p: NDArray[np.float64]) -> NDArray[np.float64]:
        if self._radii.size == 0:
            return np.zeros(p.shape[:-1])
        clearance = (self._radii + self.inflation) - self.obstacle_distances(p)
        return self.obstacle_weight * np.sum(softplus_penalty(clearance, self.sharpness), axis=-1)

    def stage_cost(self, x: NDArray[np.float64], u: NDArray[np.float64]) -> NDArray[np.float64]:
        p = x[..., 0:2]
        to_goal = np.sum((p - self.goal_position) ** 2, axis=-1)
        effort = np.sum(u ** 2, axis=-1)
        return self.goal_weight * to_goal + self.obstacle_penalty(p) + self.control_weight * effort

    def terminal_cost(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        p = x[..., 0:2]
        return self.goal_weight * np.sum((p - self.goal_position) ** 2, axis=-1) + self.obstacle_penalty(p)

    def value(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        # velocity enters isotropically so the Hessian stays well conditioned in free space
        x = np.asarray(x, dtype=np.float64)
        p = x[..., 0:2]
        return (
            self.goal_weight * (np.sum((p - self.goal_position) ** 2, axis=-1) + np.sum(x[..., 2:4] ** 2, axis=-1))
            + self.obstacle_penalty(p)
        )

    @property
    def goal(self) -> StateVector:
        return np.concatenate([self.goal_position, np.zeros(2)])

    @property
    def state_to_control(self) -> NDArray[np.float64]:
        return np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])

    def initial_state(self, rng: Optional[np.random.Generator] = None) -> StateVector:
        start = np.asarray(self.scenario.start, dtype=np.float64)
        if rng is not None:
            start = start + rng.uniform(-0.2, 0.2, size=2)
        return np.concatenate([start, np.zeros(2)])

    def trap_states(self) -> NDArray[np.float64]:
        """Start states inside the scenario's trap region, shape (k, 4)."""
        starts = np.asarray(self.scenario.trap_starts, dtype=np.float64).reshape(-1, 2)
        return np.concatenate([starts, np.zeros_like(starts)], axis=1)

    def is_success(self, x: NDArray[np.float64]) -> bool:
        return float(np.linalg.norm(np.asarray(x)[0:2] - self.goal_position)) < self.goal_tolerance

    def in_collision(self, x: NDArray[np.float64]) -> bool:
        if self._radii.size == 0:
            return False
        return bool(np.any(self.obstacle_distances(np.asarray(x)[0:2]) < self._radii))

    def default_mppi(self) -> MppiConfig:
        return MppiConfig(
            samples=1000,
            horizon=20,
            base_temperature=0.1,
            control_covariance=[[1.0, 0.0], [0.0, 1.0]],
            control_lower=[-self.max_accel] * 2,
            control_upper=[self.max_accel] * 2,
        )

    def default_detection(self) -> DetectionThresholds:
        return DetectionThresholds(
            variance_threshold=0.05,
            gradient_threshold=0.05,
            curvature_threshold=100.0,
            characteristic_scale=1.0,
        )
