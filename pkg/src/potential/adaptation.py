"""
Sampling adaptation from memory: temperature, covariance, directional bias,
and the memory term injected into rollout costs.
"""
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ContractViolation
from ..detection.classifier import FeatureKind
from ..memory.snapshot import MemorySnapshot
from .field import DEFAULT_PARAMS, Memory, active_set, alpha, evaluate_field
from .params import PotentialParams

DIRECTION_FLOOR = 1e-12


def temperature_for_alpha(alpha_value: float, base_temperature: float, gain: float) -> float:
    """λ = λ₀ (1 + η (1 − α))."""
    if not base_temperature > 0.0:
        raise ContractViolation(f"base temperature must be positive, got {base_temperature}")
    return base_temperature * (1.0 + gain * (1.0 - alpha_value))


def covariance_scale(alpha_value: float, params: PotentialParams) -> float:
    """Scalar factor ≥ 1 applied to Σ_{u,0}."""
    if params.covariance_mode == "temperature":
        return 1.0 + params.temperature_gain * (1.0 - alpha_value)
    return 1.0 + params.covariance_gain * (1.0 - alpha_value)


def adaptive_temperature(
    x: ArrayLike,
    memory: Memory,
    base_temperature: float,
    gain: Optional[float] = None,
    params: PotentialParams = DEFAULT_PARAMS,
) -> float:
    """λ(x) = λ₀ (1 + η (1 − α(x))), never below λ₀."""
    eta = params.temperature_gain if gain is None else gain
    return temperature_for_alpha(alpha(x, memory, params), base_temperature, eta)


def adaptive_covariance(
    x: ArrayLike,
    memory: Memory,
    base_covariance: ArrayLike,
    gain: Optional[float] = None,
    params: PotentialParams = DEFAULT_PARAMS,
) -> NDArray[np.float64]:
    """Σ_u(x) = Σ_{u,0} (1 + μ (1 − α(x))), or Σ_{u,0} λ/λ₀ in temperature mode."""
    if gain is not None:
        params = params.model_copy(update={"covariance_gain": gain})
    sigma = np.asarray(base_covariance, dtype=np.float64)
    return sigma * covariance_scale(alpha(x, memory, params), params)


def directional_bias(
    x: ArrayLike,
    memory: Memory,
    state_to_control: Optional[ArrayLike],
) -> Optional[NDArray[np.float64]]:
    """Unit control-space hint from the active low-gradient features.

    The stored directions are mapped by the environment's state-to-control
    matrix, averaged with strength weights and normalized. None when no
    low-gradient feature is active, no map is declared, or the mapped
    directions cancel.
    """
    if state_to_control is None:
        return None
    active = active_set(memory, x)
    plateau = active.kinds == int(FeatureKind.LOW_GRADIENT)
    if not np.any(plateau):
        return None
    mapping = np.asarray(state_to_control, dtype=np.float64)
    mapped = active.directions[plateau] @ mapping.T
    combined = np.sum(active.strengths[plateau][:, np.newaxis] * mapped, axis=0)
    norm = float(np.linalg.norm(combined))
    if norm < DIRECTION_FLOOR:
        return None
    return combined / norm


class MemoryCostAugmentation:
    """w_mem Σ_t (1 − α(x_t)) V_mem(x_t) over every rollout state, t = 0..H."""

    def __init__(self, snapshot: MemorySnapshot, params: PotentialParams, weight: float = 1.0):
        self.snapshot = snapshot
        self.params = params
        self.weight = weight

    def __call__(self, states: NDArray[np.float64]) -> NDArray[np.float64]:
        k, steps, n = states.shape
        terms = evaluate_field(self.snapshot, states.reshape(k * steps, n), self.params)
        return self.weight * terms.penalty.reshape(k, steps).sum(axis=1)
