"""
Exponential trajectory weighting and the weighted-average control law.
"""
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ContractViolation, NoFeasibleRolloutError
from .rollout import RolloutBatch

WEIGHT_SUM_TOLERANCE = 1e-9


def mppi_weights(costs: ArrayLike, temperature: float) -> NDArray[np.float64]:
    """Normalized path-integral weights w_k ∝ exp(-(S_k - min S)/λ).

    Infinite (or NaN) costs get weight zero.

    Raises:
        ContractViolation: If λ is not positive
        NoFeasibleRolloutError: If no cost is finite
    """
    if not temperature > 0.0:
        raise ContractViolation(f"temperature must be positive, got {temperature}")
    values = np.asarray(costs, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise ContractViolation("costs must be a non-empty 1-D array")

    finite = np.isfinite(values)
    if not finite.any():
        raise NoFeasibleRolloutError()

    baseline = values[finite].min()
    weights = np.zeros_like(values)
    weights[finite] = np.exp(-(values[finite] - baseline) / temperature)
    return weights / weights.sum()


def effective_sample_size(weights: ArrayLike) -> float:
    """1 / Σ w_k², between 1 and K for normalized weights."""
    w = np.asarray(weights, dtype=np.float64)
    return float(1.0 / np.dot(w, w))


def optimal_control(
    batch: Union[RolloutBatch, ArrayLike],
    weights: ArrayLike,
    lower: Optional[ArrayLike] = None,
    upper: Optional[ArrayLike] = None,
) -> NDArray[np.float64]:
    """Per-step weighted average of the sampled control sequences.

    Args:
        batch: Scored batch, or a raw (K, H, m) control array
        weights: Normalized weights, shape (K,)
        lower: Optional lower control bound applied after averaging
        upper: Optional upper control bound applied after averaging

    Returns:
        Control sequence of shape (H, m)
    """
    controls = batch.controls if isinstance(batch, RolloutBatch) else np.asarray(batch, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (controls.shape[0],):
        raise ContractViolation(f"expected {controls.shape[0]} weights, got shape {w.shape}")
    if abs(w.sum() - 1.0) > WEIGHT_SUM_TOLERANCE:
        raise ContractViolation(f"weights sum to {w.sum():.12f}, expected 1")

    sequence = np.tensordot(w, controls, axes=1)
    if lower is not None or upper is not None:
        sequence = np.clip(sequence, lower, upper)
    return sequence
