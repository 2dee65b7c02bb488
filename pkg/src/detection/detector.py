"""
Stateful feature detector driven once per control step.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import UndefinedAngleError
from ..core.types import as_state
from .classifier import (
    CandidateFeature,
    CurvatureSignal,
    GradientSignal,
    classify,
)
from .signals import ValueFunction, detect_stagnation, gradient_angle_change, hessian_condition, numeric_gradient
from .thresholds import DetectionThresholds
from .window import StateWindow

logger = logging.getLogger(__name__)

GradientFunction = Callable[[NDArray[np.float64]], NDArray[np.float64]]


@dataclass(frozen=True)
class DetectionResult:
    """Outcome of one detector step."""
    candidate: Optional[CandidateFeature]
    stagnating: bool
    gradient: Optional[GradientSignal] = None
    curvature: Optional[CurvatureSignal] = None


class FeatureDetector:
    """Runs the stagnation, gradient and curvature checks at their cadences.

    A local-minimum candidate is emitted when stagnation begins and then at
    most once per window length while it lasts. The curvature check also runs
    off-cadence whenever the gradient turns by more than θ_angle.
    """

    def __init__(
        self,
        thresholds: DetectionThresholds,
        value: ValueFunction,
        gradient: Optional[GradientFunction] = None,
        goal: Optional[ArrayLike] = None,
    ):
        self.thresholds = thresholds
        self.value = value
        self.gradient = gradient
        self.goal = None if goal is None else np.asarray(goal, dtype=np.float64)
        self.window = StateWindow(thresholds.window)
        self.reset()

    def reset(self) -> None:
        self.window.clear()
        self.step_count = 0
        self.stagnating = False
        self._previous_gradient: Optional[NDArray[np.float64]] = None
        self._last_minimum_step: Optional[int] = None

    def _measure_gradient(self, x: NDArray[np.float64]) -> GradientSignal:
        if self.gradient is not None:
            g = np.asarray(self.gradient(x), dtype=np.float64)
        else:
            g = numeric_gradient(self.value, x, self.thresholds.step_size)
        angle = None
        if self._previous_gradient is not None:
            try:
                angle = gradient_angle_change(g, self._previous_gradient)
            except UndefinedAngleError:
                angle = None
        self._previous_gradient = g
        return GradientSignal(gradient=g, angle_change=angle)

    def observe(self, x: ArrayLike) -> DetectionResult:
        """Push x into the window and run the checks due at this step."""
        t = self.step_count
        self.step_count += 1
        state = as_state(x)
        self.window.push(t, state)
        thresholds = self.thresholds

        was_stagnating = self.stagnating
        if t % thresholds.stagnation_cadence == 0:
            self.stagnating = detect_stagnation(self.window, thresholds.variance_threshold)

        if self.stagnating:
            rising = not was_stagnating
            due = self._last_minimum_step is None or t - self._last_minimum_step >= thresholds.window
            if not (rising or due):
                return DetectionResult(candidate=None, stagnating=True)
            candidate = classify(self.window, None, None, thresholds, stagnating=True)
            self._last_minimum_step = t
            logger.debug(f"Local minimum candidate at step {t}", extra={"position": candidate.position.tolist()})
            return DetectionResult(candidate=candidate, stagnating=True)

        gradient_signal = None
        if thresholds.gradient_checks and t % thresholds.gradient_cadence == 0:
            gradient_signal = self._measure_gradient(state)

        curvature_signal = None
        turned = (
            gradient_signal is not None
            and gradient_signal.angle_change is not None
            and gradient_signal.angle_change > thresholds.angle_threshold
        )
        if thresholds.curvature_checks and (t % thresholds.curvature_cadence == 0 or turned):
            curvature_signal = CurvatureSignal(
                condition=hessian_condition(self.value, state, thresholds.step_size)
            )

        candidate = classify(
            self.window,
            gradient_signal,
            curvature_signal,
            thresholds,
            goal=self.goal,
            stagnating=False,
        )
        if candidate is not None:
            logger.debug(f"Kind {int(candidate.kind)} candidate at step {t}")
        return DetectionResult(
            candidate=candidate,
            stagnating=False,
            gradient=gradient_signal,
            curvature=curvature_signal,
        )
