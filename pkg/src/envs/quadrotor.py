"""
Rigid-body quadrotor flying waypoints among vertical cylinders.

State layout: position (3), velocity (3), rotation matrix body→world
row-major (9), body angular velocity (3). Control is collective thrust
followed by the three body torques. The dynamics are integrated with RK4
and the rotation block is projected back onto SO(3) after every step.
"""
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.types import StateVector
from ..detection.thresholds import DetectionThresholds
from ..mppi.config import MppiConfig
from .base import Environment, softplus_penalty
from .scenarios import Scenario, scenario_family

POSITION = slice(0, 3)
VELOCITY = slice(3, 6)
ROTATION = slice(6, 15)
ANGULAR_VELOCITY = slice(15, 18)


def hat(w: ArrayLike) -> NDArray[np.float64]:
    """Skew-symmetric matrix with hat(w) @ v = w × v, vectorized over leading dims."""
    w = np.asarray(w, dtype=np.float64)
    zero = np.zeros(w.shape[:-1])
    wx, wy, wz = w[..., 0], w[..., 1], w[..., 2]
    return np.stack([
        np.stack([zero, -wz, wy], axis=-1),
        np.stack([wz, zero, -wx], axis=-1),
        np.stack([-wy, wx, zero], axis=-1),
    ], axis=-2)


def project_rotation(r: NDArray[np.float64]) -> NDArray[np.float64]:
    """Nearest rotation matrices R = U Vᵀ with det(R) = +1.

    Only finite matrices are projected; rows holding NaN or infinity pass
    through unchanged so the rollout is reported as infeasible downstream.
    """
    out = np.array(r, dtype=np.float64, copy=True)
    flat = out.reshape(-1, 3, 3)
    finite = np.all(np.isfinite(flat), axis=(1, 2))
    if not np.any(finite):
        return out
    u, _, vt = np.linalg.svd(flat[finite])
    det = np.linalg.det(u @ vt)
    u[det < 0.0, :, 2] *= -1.0
    flat[finite] = u @ vt
    return flat.reshape(out.shape)


def hover_state(position: ArrayLike) -> StateVector:
    """Level attitude at rest at ``position``."""
    return np.concatenate([np.asarray(position, dtype=np.float64), np.zeros(3), np.eye(3).ravel(), np.zeros(3)])


@dataclass(frozen=True, eq=False)
class QuadrotorEnv(Environment):
    """Quadrotor with drag, waypoint tracking and cylinder obstacles."""
    scenario: Scenario = field(default_factory=lambda: scenario_family("single-cylinder"))
    mass: float = 1.5
    inertia: Tuple[float, float, float] = (0.0125, 0.0125, 0.0225)
    drag: float = 0.1
    gravity: float = 9.81
    dt: float = 0.02
    max_thrust: float = 30.0
    max_torque: float = 0.5
    position_weight: float = 1.0
    velocity_weight: float = 0.1
    attitude_weight: float = 1.0
    rate_weight: float = 0.01
    thrust_weight: float = 0.001
    torque_weight: float = 0.01
    obstacle_weight: float = 100.0
    inflation: float = 0.3
    sharpness: float = 5.0
    waypoint_tolerance: float = 0.5
    target_index: int = 0

    name = "quadrotor"
    state_dim = 18
    control_dim = 4

    def __post_init__(self) -> None:
        targets = [*self.scenario.waypoints, self.scenario.goal]
        altitude = self.scenario.altitude
        object.__setattr__(self, "_targets", np.array([[x, y, altitude] for x, y in targets], dtype=np.float64))
        object.__setattr__(self, "_centers", self.scenario.centers)
        object.__setattr__(self, "_radii", self.scenario.radii)
        object.__setattr__(self, "_inertia", np.asarray(self.inertia, dtype=np.float64))

    @property
    def control_lower(self) -> NDArray[np.float64]:
        return np.array([0.0, -self.max_torque, -self.max_torque, -self.max_torque])

    @property
    def control_upper(self) -> NDArray[np.float64]:
        return np.array([self.max_thrust, self.max_torque, self.max_torque, self.max_torque])

    @property
    def hover_thrust(self) -> float:
        return self.mass * self.gravity

    @property
    def target(self) -> NDArray[np.float64]:
        return self._targets[self.target_index]

    @property
    def targets(self) -> NDArray[np.float64]:
        return self._targets

    def default_control(self) -> NDArray[np.float64]:
        return np.array([self.hover_thrust, 0.0, 0.0, 0.0])

    def derivative(self, x: NDArray[np.float64], u: NDArray[np.float64]) -> NDArray[np.float64]:
        """Continuous-time state derivative."""
        v = x[..., VELOCITY]
        r = x[..., ROTATION].reshape(x.shape[:-1] + (3, 3))
        w = x[..., ANGULAR_VELOCITY]
        thrust = u[..., 0]
        torque = u[..., 1:4]

        gravity = np.array([0.0, 0.0, -self.gravity])
        speed = np.linalg.norm(v, axis=-1, keepdims=True)
        v_dot = gravity + r[..., :, 2] * (thrust / self.mass)[..., np.newaxis] - self.drag * speed * v
        r_dot = r @ hat(w)
        jw = self._inertia * w
        w_dot = (torque - np.cross(w, jw)) / self._inertia
        return np.concatenate([v, v_dot, r_dot.reshape(x.shape[:-1] + (9,)), w_dot], axis=-1)

    def step(self, x: NDArray[np.float64], u: NDArray[np.float64]) -> NDArray[np.float64]:
        u = np.clip(u, self.control_lower, self.control_upper)
        h = self.dt
        k1 = self.derivative(x, u)
        k2 = self.derivative(x + 0.5 * h * k1, u)
        k3 = self.derivative(x + 0.5 * h * k2, u)
        k4 = self.derivative(x + h * k3, u)
        nxt = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rotation = project_rotation(nxt[..., ROTATION].reshape(nxt.shape[:-1] + (3, 3)))
        nxt[..., ROTATION] = rotation.reshape(nxt.shape[:-1] + (9,))
        return nxt

    def angular_momentum(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        """World-frame angular momentum R J ω."""
        r = x[..., ROTATION].reshape(x.shape[:-1] + (3, 3))
        return np.einsum("...ij,...j->...i", r, self._inertia * x[..., ANGULAR_VELOCITY])

    def obstacle_penalty(self, p: NDArray[np.float64]) -> NDArray[np.float64]:
        if self._radii.size == 0:
            return np.zeros(p.shape[:-1])
        distance = np.linalg.norm(p[..., np.newaxis, 0:2] - self._centers, axis=-1)
        clearance = (self._radii + self.inflation) - distance
        return self.obstacle_weight * np.sum(softplus_penalty(clearance, self.sharpness), axis=-1)

    def value(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=np.float64)
        p = x[..., POSITION]
        trace = x[..., 6] + x[..., 10] + x[..., 14]
        return (
            self.position_weight * np.sum((p - self.target) ** 2, axis=-1)
            + self.velocity_weight * np.sum(x[..., VELOCITY] ** 2, axis=-1)
            + self.attitude_weight * (3.0 - trace)
            + self.rate_weight * np.sum(x[..., ANGULAR_VELOCITY] ** 2, axis=-1)
            + self.obstacle_penalty(p)
        )

    def stage_cost(self, x: NDArray[np.float64], u: NDArray[np.float64]) -> NDArray[np.float64]:
        effort = self.thrust_weight * u[..., 0] ** 2 + self.torque_weight * np.sum(u[..., 1:4] ** 2, axis=-1)
        return self.value(x) + effort

    def terminal_cost(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.value(x)

    @property
    def goal(self) -> StateVector:
        return hover_state(self._targets[-1])

    def initial_state(self, rng: Optional[np.random.Generator] = None) -> StateVector:
        start = np.array([*self.scenario.start, self.scenario.altitude])
        if rng is not None:
            start[0:2] += rng.uniform(-0.2, 0.2, size=2)
        return hover_state(start)

    def trap_states(self) -> NDArray[np.float64]:
        altitude = self.scenario.altitude
        return np.array(
            [hover_state((x, y, altitude)) for x, y in self.scenario.trap_starts],
            dtype=np.float64,
        ).reshape(-1, self.state_dim)

    def retarget(self, x: NDArray[np.float64]) -> "QuadrotorEnv":
        """Advance to the next waypoint once the current one is reached."""
        last = len(self._targets) - 1
        if self.target_index >= last:
            return self
        if np.linalg.norm(np.asarray(x)[POSITION] - self.target) < self.waypoint_tolerance:
            return replace(self, target_index=self.target_index + 1)
        return self

    def is_success(self, x: NDArray[np.float64]) -> bool:
        at_last = self.target_index == len(self._targets) - 1
        return at_last and float(np.linalg.norm(np.asarray(x)[POSITION] - self.target)) < self.waypoint_tolerance

    def in_collision(self, x: NDArray[np.float64]) -> bool:
        p = np.asarray(x)[POSITION]
        if p[2] < 0.0:
            return True
        if self._radii.size == 0:
            return False
        return bool(np.any(np.linalg.norm(p[0:2] - self._centers, axis=-1) < self._radii))

    def default_mppi(self) -> MppiConfig:
        thrust_sigma = 4.0
        torque_sigma = 0.1
        return MppiConfig(
            samples=1000,
            horizon=20,
            base_temperature=0.1,
            control_covariance=np.diag([thrust_sigma, torque_sigma, torque_sigma, torque_sigma]).tolist(),
            control_lower=self.control_lower.tolist(),
            control_upper=self.control_upper.tolist(),
        )

    def default_detection(self) -> DetectionThresholds:
        # rotation entries enter the value linearly, so the Hessian is singular by construction
        return DetectionThresholds(
            variance_threshold=0.05,
            gradient_threshold=0.05,
            curvature_checks=False,
        )
