"""
Candidate feature classification and escape directions.
"""
from dataclasses import dataclass
from enum import IntEnum
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ContractViolation, DirectionUnavailableError
from .signals import GRADIENT_FLOOR, detect_stagnation
from .thresholds import DetectionThresholds
from .window import StateWindow

UNIT_TOLERANCE = 1e-9


class FeatureKind(IntEnum):
    """Topological feature kinds κ."""
    LOCAL_MINIMUM = 1
    LOW_GRADIENT = 2
    HIGH_CURVATURE = 3


@dataclass(frozen=True)
class GradientSignal:
    """Gradient measured at the latest window state.

    Attributes:
        gradient: ∇V_base at the latest state
        angle_change: Angle to the previous measured gradient, None when undefined
    """
    gradient: NDArray[np.float64]
    angle_change: Optional[float] = None

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.gradient))


@dataclass(frozen=True)
class CurvatureSignal:
    """Condition number of ∇²V_base at the latest window state."""
    condition: float


@dataclass(frozen=True)
class CandidateFeature:
    """A feature proposed by the detector, not yet in memory."""
    position: NDArray[np.float64]
    kind: FeatureKind
    radius: float
    direction: Optional[NDArray[np.float64]] = None

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=np.float64))
        object.__setattr__(self, "kind", FeatureKind(self.kind))
        if not self.radius > 0.0:
            raise ContractViolation(f"candidate radius must be positive, got {self.radius}")
        if self.kind == FeatureKind.LOCAL_MINIMUM:
            if self.direction is not None:
                raise ContractViolation("local-minimum candidates carry no direction")
            return
        if self.direction is None:
            raise ContractViolation(f"kind {int(self.kind)} candidates require a direction")
        direction = np.asarray(self.direction, dtype=np.float64)
        if direction.shape != self.position.shape or abs(np.linalg.norm(direction) - 1.0) > UNIT_TOLERANCE:
            raise ContractViolation("candidate direction must be a unit vector of the state dimension")
        object.__setattr__(self, "direction", direction)


def fallback_direction(gradient: ArrayLike) -> NDArray[np.float64]:
    """Normalized -∇V, or the first axis when the gradient vanishes."""
    g = np.asarray(gradient, dtype=np.float64)
    norm = float(np.linalg.norm(g))
    if norm < GRADIENT_FLOOR:
        axis = np.zeros_like(g)
        axis[0] = 1.0
        return axis
    return -g / norm


def suggested_radius(window: StateWindow, thresholds: DetectionThresholds) -> float:
    return thresholds.radius_gain * max(window.spread(), thresholds.min_radius)


def classify(
    window: StateWindow,
    gradient_signal: Optional[GradientSignal],
    curvature_signal: Optional[CurvatureSignal],
    thresholds: DetectionThresholds,
    goal: Optional[ArrayLike] = None,
    stagnating: Optional[bool] = None,
) -> Optional[CandidateFeature]:
    """Classify the current window into at most one candidate feature.

    Kinds are tested in priority order: stagnation gives a local minimum at
    the window mean; a small gradient away from the goal gives a low-gradient
    region; a large gradient turn or a large condition number gives a
    high-curvature region. Signals that were not computed this step are None.

    Args:
        window: Recent states
        gradient_signal: Gradient at the latest state, if measured this step
        curvature_signal: Condition number at the latest state, if measured this step
        thresholds: Detection thresholds
        goal: Declared goal state; low-gradient detection is suppressed near it
        stagnating: Precomputed stagnation flag; computed from the window when None

    Returns:
        The candidate, or None
    """
    if len(window) == 0:
        return None
    if stagnating is None:
        stagnating = detect_stagnation(window, thresholds.variance_threshold)
    radius = suggested_radius(window, thresholds)

    if stagnating:
        return CandidateFeature(position=window.mean(), kind=FeatureKind.LOCAL_MINIMUM, radius=radius)

    position = window.latest
    if gradient_signal is not None and gradient_signal.norm < thresholds.gradient_threshold:
        near_goal = goal is not None and (
            np.linalg.norm(position - np.asarray(goal, dtype=np.float64)) <= 2.0 * thresholds.min_radius
        )
        if not near_goal:
            return CandidateFeature(
                position=position,
                kind=FeatureKind.LOW_GRADIENT,
                radius=radius,
                direction=fallback_direction(gradient_signal.gradient),
            )

    turned = (
        gradient_signal is not None
        and gradient_signal.angle_change is not None
        and gradient_signal.angle_change > thresholds.angle_threshold
    )
    ill_conditioned = curvature_signal is not None and curvature_signal.condition > thresholds.curvature_threshold
    if turned or ill_conditioned:
        gradient = gradient_signal.gradient if gradient_signal is not None else np.zeros_like(position)
        return CandidateFeature(
            position=position,
            kind=FeatureKind.HIGH_CURVATURE,
            radius=radius,
            direction=fallback_direction(gradient),
        )
    return None


def escape_direction(
    history: Union[StateWindow, ArrayLike],
    center: ArrayLike,
    radius: float,
) -> NDArray[np.float64]:
    """Unit vector from the center to the first recorded state outside the radius.

    Raises:
        DirectionUnavailableError: If every recorded state is within the radius
    """
    if isinstance(history, StateWindow):
        if len(history) == 0:
            raise DirectionUnavailableError()
        states = history.states
    else:
        states = np.asarray(history, dtype=np.float64)
        if states.size == 0:
            raise DirectionUnavailableError()
        states = np.atleast_2d(states)
    m = np.asarray(center, dtype=np.float64)
    offsets = states - m
    distances = np.linalg.norm(offsets, axis=1)
    outside = np.flatnonzero(distances > radius)
    if outside.size == 0:
        raise DirectionUnavailableError()
    first = outside[0]
    return offsets[first] / distances[first]
