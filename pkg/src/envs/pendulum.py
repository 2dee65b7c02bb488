"""
Torque-limited pendulum swing-up.

θ = 0 is upright; θ̈ = (g/l) sin θ + u/(m l²) − damping · ω, integrated with
semi-implicit Euler and wrapped to (−π, π].
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from ..core.types import StateVector
from ..detection.thresholds import DetectionThresholds
from ..mppi.config import MppiConfig
from .base import Environment


def wrap_angle(theta: NDArray[np.float64]) -> NDArray[np.float64]:
    """Wrap angles into (−π, π]."""
    return theta - 2.0 * math.pi * np.ceil((theta - math.pi) / (2.0 * math.pi))


@dataclass(frozen=True)
class PendulumEnv(Environment):
    """Pendulum with state (θ, ω) and scalar torque control."""
    mass: float = 1.0
    length: float = 1.0
    gravity: float = 10.0
    max_torque: float = 2.0
    max_speed: float = 8.0
    damping: float = 0.0
    dt: float = 0.05
    angle_weight: float = 1.0
    velocity_weight: float = 0.1
    control_weight: float = 0.001

    name = "pendulum"
    state_dim = 2
    control_dim = 1

    @property
    def control_lower(self) -> NDArray[np.float64]:
        return np.array([-self.max_torque])

    @property
    def control_upper(self) -> NDArray[np.float64]:
        return np.array([self.max_torque])

    def step(self, x: NDArray[np.float64], u: NDArray[np.float64]) -> NDArray[np.float64]:
        theta = x[..., 0]
        omega = x[..., 1]
        torque = np.clip(u[..., 0], -self.max_torque, self.max_torque)
        acceleration = (
            (self.gravity / self.length) * np.sin(theta)
            + torque / (self.mass * self.length ** 2)
            - self.damping * omega
        )
        omega_next = np.clip(omega + acceleration * self.dt, -self.max_speed, self.max_speed)
        theta_next = wrap_angle(theta + omega_next * self.dt)
        return np.stack([theta_next, omega_next], axis=-1)

    def energy(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        """E = ½ m l² ω² + m g l cos θ."""
        return (
            0.5 * self.mass * self.length ** 2 * x[..., 1] ** 2
            + self.mass * self.gravity * self.length * np.cos(x[..., 0])
        )

    def stage_cost(self, x: NDArray[np.float64], u: NDArray[np.float64]) -> NDArray[np.float64]:
        theta = wrap_angle(x[..., 0])
        return (
            self.angle_weight * theta ** 2
            + self.velocity_weight * x[..., 1] ** 2
            + self.control_weight * u[..., 0] ** 2
        )

    def value(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        theta = wrap_angle(np.asarray(x)[..., 0])
        return self.angle_weight * theta ** 2 + self.velocity_weight * np.asarray(x)[..., 1] ** 2

    @property
    def has_value_gradient(self) -> bool:
        return True

    def value_gradient(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.array([
            2.0 * self.angle_weight * float(wrap_angle(np.asarray(x[0]))),
            2.0 * self.velocity_weight * float(x[1]),
        ])

    @property
    def goal(self) -> StateVector:
        return np.zeros(2)

    def initial_state(self, rng: Optional[np.random.Generator] = None) -> StateVector:
        if rng is None:
            return np.array([math.pi, 0.0])
        return np.array([rng.uniform(-math.pi, math.pi), rng.uniform(-1.0, 1.0)])

    def is_success(self, x: NDArray[np.float64]) -> bool:
        return abs(float(wrap_angle(np.asarray(x[0])))) < 0.1 and abs(float(x[1])) < 0.5

    def default_mppi(self) -> MppiConfig:
        return MppiConfig(
            samples=1000,
            horizon=15,
            base_temperature=0.1,
            control_covariance=[[1.0]],
            control_lower=[-self.max_torque],
            control_upper=[self.max_torque],
        )

    def default_detection(self) -> DetectionThresholds:
        return DetectionThresholds(variance_threshold=0.01, gradient_threshold=0.05, curvature_threshold=100.0)
