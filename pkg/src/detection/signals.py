"""
Detection signals: window variance, finite-difference gradient and curvature.
"""
import math
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import (
    ContractViolation,
    NonFiniteEvaluationError,
    UndefinedAngleError,
    WindowUnderfilledError,
)
from ..core.types import as_state
from .window import StateWindow

ValueFunction = Callable[[NDArray[np.float64]], float]

GRADIENT_FLOOR = 1e-12
EIGENVALUE_FLOOR = 1e-12
# Multiple of eps · |V| / h², the rounding error of one second difference, treated as zero curvature
ROUNDING_MARGIN = 16.0


def state_variance(window: StateWindow) -> float:
    """Mean squared distance of the window states from their mean."""
    if len(window) < 2:
        raise WindowUnderfilledError()
    states = window.states
    deviations = states - states.mean(axis=0)
    return float(np.mean(np.sum(deviations * deviations, axis=1)))


def detect_stagnation(window: StateWindow, variance_threshold: float) -> bool:
    """True iff the window is full and its variance is strictly below θ_var."""
    if not window.full:
        return False
    return state_variance(window) < variance_threshold


def _evaluate(value: ValueFunction, points: NDArray[np.float64]) -> NDArray[np.float64]:
    values = np.array([float(value(p)) for p in points], dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise NonFiniteEvaluationError("value function returned a non-finite result")
    return values


def numeric_gradient(value: ValueFunction, x: ArrayLike, h: float) -> NDArray[np.float64]:
    """Central-difference gradient of a scalar function.

    Args:
        value: Scalar function of the state
        x: Evaluation point
        h: Step size

    Returns:
        Gradient vector, shape (n,)
    """
    if not h > 0.0:
        raise ContractViolation(f"step size must be positive, got {h}")
    point = as_state(x)
    offsets = h * np.eye(point.size)
    forward = _evaluate(value, point + offsets)
    backward = _evaluate(value, point - offsets)
    return (forward - backward) / (2.0 * h)


def gradient_angle_change(g_now: ArrayLike, g_prev: ArrayLike) -> float:
    """Angle in [0, π] between two gradient vectors."""
    a = np.asarray(g_now, dtype=np.float64)
    b = np.asarray(g_prev, dtype=np.float64)
    if a.shape != b.shape:
        raise ContractViolation(f"gradient shapes differ: {a.shape} vs {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a < GRADIENT_FLOOR or norm_b < GRADIENT_FLOOR:
        raise UndefinedAngleError()
    cosine = float(np.dot(a, b)) / (norm_a * norm_b)
    return math.acos(min(1.0, max(-1.0, cosine)))


def numeric_hessian(value: ValueFunction, x: ArrayLike, h: float) -> NDArray[np.float64]:
    """Symmetrized central-difference Hessian."""
    if not h > 0.0:
        raise ContractViolation(f"step size must be positive, got {h}")
    point = as_state(x)
    n = point.size
    eye = h * np.eye(n)
    center = _evaluate(value, point[np.newaxis])[0]
    forward = _evaluate(value, point + eye)
    backward = _evaluate(value, point - eye)

    hessian = np.empty((n, n), dtype=np.float64)
    hessian[np.diag_indices(n)] = (forward - 2.0 * center + backward) / (h * h)
    for i in range(n):
        for j in range(i + 1, n):
            corners = np.stack([
                point + eye[i] + eye[j],
                point + eye[i] - eye[j],
                point - eye[i] + eye[j],
                point - eye[i] - eye[j],
            ])
            pp, pm, mp, mm = _evaluate(value, corners)
            hessian[i, j] = hessian[j, i] = (pp - pm - mp + mm) / (4.0 * h * h)
    return 0.5 * (hessian + hessian.T)


def hessian_condition(value: ValueFunction, x: ArrayLike, h: float) -> float:
    """Condition number max|λ| / min|λ| of the finite-difference Hessian.

    Returns +inf when the smallest |λ| is below 1e-12 or below the rounding
    noise of the second differences, so an affine V reads as singular. Adding
    a constant to V leaves κ unchanged up to that noise; only an offset large
    enough to drown the curvature in rounding (|V| near λ_min · h² / (16 eps))
    makes the Hessian read as singular.
    """
    hessian = numeric_hessian(value, x, h)
    if not np.all(np.isfinite(hessian)):
        raise NonFiniteEvaluationError("Hessian has non-finite entries")
    magnitudes = np.abs(np.linalg.eigvalsh(hessian))
    scale = abs(float(value(as_state(x))))
    floor = max(EIGENVALUE_FLOOR, ROUNDING_MARGIN * np.finfo(np.float64).eps * max(scale, 1.0) / (h * h))
    smallest = float(magnitudes.min())
    if smallest < floor:
        return math.inf
    return float(magnitudes.max()) / smallest
