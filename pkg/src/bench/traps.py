"""
Trap interval detection on recorded episodes.
"""
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ContractViolation

MIN_RADIUS_FACTOR = 0.05


@dataclass(frozen=True)
class TrapEvent:
    """A stretch of steps spent stuck near one state.

    Attributes:
        entry: First step of the interval
        exit: First step after the interval, None if it lasted to the end
        length: Number of steps in the interval
        radius: Neighborhood radius used
        improved_after: Whether a later step beat the best value held at exit
    """
    entry: int
    exit: Optional[int]
    length: int
    radius: float
    improved_after: bool = False

    @property
    def escaped(self) -> bool:
        """Left the neighborhood and then made progress."""
        return self.exit is not None and self.improved_after


def _spread(states: NDArray[np.float64]) -> float:
    return float(np.max(np.linalg.norm(states - states.mean(axis=0), axis=1)))


def normalized_return(values: ArrayLike, optimal_value: Optional[float] = None) -> NDArray[np.float64]:
    """Return of each step relative to the best achievable one, in [0, 1].

    0 is the worst value proxy of the episode and 1 the optimum: the known
    optimal value when given (or the episode's best if that is lower), else
    the episode's best. An episode sitting at the optimum throughout maps to 1.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        return v.copy()
    worst = float(np.max(v))
    best = float(np.min(v))
    if optimal_value is not None:
        best = min(best, float(optimal_value))
    spread = worst - best
    if spread <= 0.0:
        return np.ones_like(v)
    return (worst - v) / spread


def detect_trap_episodes(
    states: ArrayLike,
    values: ArrayLike,
    value_threshold_frac: float = 0.5,
    neighborhood_radius: Optional[float] = None,
    threshold_steps: int = 50,
    improvement_tolerance: float = 1e-6,
    scale: float = 1.0,
    window: int = 20,
    radius_factor: float = 3.0,
    success: Optional[ArrayLike] = None,
    optimal_value: Optional[float] = None,
) -> List[TrapEvent]:
    """Find intervals where the system is stuck.

    A step is eligible when the best value proxy of the episode so far did not
    decrease by more than ``improvement_tolerance · scale`` and its normalized
    return (see ``normalized_return``) lies below ``value_threshold_frac``.
    Without ``optimal_value`` a stall at the episode's best value is never a
    trap. A trap is a run of at least ``threshold_steps``
    consecutive eligible steps that stay within the neighborhood radius of the
    run's first state. Without a fixed radius the neighborhood is
    ``radius_factor`` times the spread of the ``window`` states starting at the
    entry, floored at 0.05 · scale.

    Args:
        states: Visited states, shape (T, n)
        values: Value proxy per step (lower is better), shape (T,)
        value_threshold_frac: Normalized return below which a state counts as low-return
        neighborhood_radius: Fixed neighborhood radius
        threshold_steps: Minimum interval length
        improvement_tolerance: Relative improvement tolerance
        scale: Characteristic state and value scale
        window: States used by the spread rule
        radius_factor: Multiple of the spread used as radius
        success: Per-step goal flags; states at the goal are never trapped
        optimal_value: Value proxy at the goal, when known

    Returns:
        Trap events in order of entry
    """
    x = np.asarray(states, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if x.ndim != 2 or v.shape != (x.shape[0],):
        raise ContractViolation(f"states {x.shape} and values {v.shape} do not describe one episode")
    if threshold_steps < 1:
        raise ContractViolation(f"threshold_steps must be positive, got {threshold_steps}")
    if not 0.0 <= value_threshold_frac <= 1.0:
        raise ContractViolation(f"value_threshold_frac must lie in [0, 1], got {value_threshold_frac}")
    steps = v.shape[0]
    if steps == 0:
        return []

    tolerance = improvement_tolerance * scale
    improved = np.zeros(steps, dtype=bool)
    best_so_far = np.empty(steps)
    best = np.inf
    for t in range(steps):
        if v[t] < best - tolerance:
            improved[t] = True
        best = min(best, v[t])
        best_so_far[t] = best
    eligible = ~improved & (normalized_return(v, optimal_value) < value_threshold_frac)
    if success is not None:
        eligible &= ~np.asarray(success, dtype=bool)

    events: List[TrapEvent] = []
    floor = MIN_RADIUS_FACTOR * scale
    i = 0
    while i < steps:
        if not eligible[i]:
            i += 1
            continue
        if neighborhood_radius is not None:
            radius = neighborhood_radius
        else:
            radius = max(radius_factor * _spread(x[i:i + window]), floor)
        j = i
        while j < steps and eligible[j] and np.linalg.norm(x[j] - x[i]) <= radius:
            j += 1
        if j - i >= threshold_steps:
            exit_step = j if j < steps else None
            improved_after = exit_step is not None and bool(np.any(v[j:] < best_so_far[j - 1] - tolerance))
            events.append(TrapEvent(
                entry=i,
                exit=exit_step,
                length=j - i,
                radius=radius,
                improved_after=improved_after,
            ))
            i = j
        else:
            i += 1
    return events
