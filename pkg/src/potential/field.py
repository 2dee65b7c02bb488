"""
Memory potential V_mem, proximity δ, adaptive weight α and the enhanced value.

Every function accepts either a live ``MemoryStore`` (single-point queries go
through its spatial index) or an immutable ``MemorySnapshot``.
"""
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ContractViolation
from ..core.types import as_state
from ..detection.classifier import FeatureKind
from ..memory.snapshot import MemorySnapshot
from ..memory.store import MemoryStore
from .basis import pair_gradients, pair_potentials
from .params import PotentialParams

Memory = Union[MemoryStore, MemorySnapshot]
ValueFunction = Callable[[NDArray[np.float64]], float]
GradientFunction = Callable[[NDArray[np.float64]], NDArray[np.float64]]

DEFAULT_PARAMS = PotentialParams()


def _snapshot(memory: Memory) -> MemorySnapshot:
    return memory.snapshot() if isinstance(memory, MemoryStore) else memory


@dataclass(frozen=True)
class ActiveSet:
    """Features whose influence region contains one query point."""
    offsets: NDArray[np.float64]
    distances: NDArray[np.float64]
    radii: NDArray[np.float64]
    strengths: NDArray[np.float64]
    kinds: NDArray[np.int64]
    directions: NDArray[np.float64]
    # min_i ‖x − m_i‖ / r_i over the active features (inf when none) and its gradient
    min_ratio: float
    min_ratio_gradient: NDArray[np.float64]

    def __len__(self) -> int:
        return self.distances.shape[0]


def active_set(memory: Memory, x: ArrayLike) -> ActiveSet:
    """Collect the active features at x through the memory's spatial query."""
    point = as_state(x)
    snapshot = _snapshot(memory)
    n = point.size

    if isinstance(memory, MemoryStore):
        pairs = memory.query_active(point)
        features = [feature for feature, _ in pairs]
        distances = np.array([distance for _, distance in pairs], dtype=np.float64)
        positions = np.stack([f.position for f in features]) if features else np.empty((0, n))
        radii = np.array([f.radius for f in features], dtype=np.float64)
        strengths = np.array([f.strength for f in features], dtype=np.float64)
        kinds = np.array([int(f.kind) for f in features], dtype=np.int64)
        directions = (
            np.stack([f.direction if f.direction is not None else np.zeros(n) for f in features])
            if features else np.empty((0, n))
        )
    elif len(snapshot) == 0:
        distances = radii = strengths = np.empty(0)
        kinds = np.empty(0, dtype=np.int64)
        positions = directions = np.empty((0, n))
    else:
        _, index, distances = snapshot.active_pairs(point[np.newaxis])
        positions = snapshot.positions[index]
        radii = snapshot.radii[index]
        strengths = snapshot.strengths[index]
        kinds = snapshot.kinds[index]
        directions = snapshot.directions[index]

    offsets = point - positions
    min_ratio = np.inf
    min_ratio_gradient = np.zeros(n)
    if distances.size > 0:
        ratios = distances / radii
        nearest = int(np.argmin(ratios))
        min_ratio = float(ratios[nearest])
        if distances[nearest] > 0.0:
            min_ratio_gradient = offsets[nearest] / (distances[nearest] * radii[nearest])

    return ActiveSet(
        offsets=offsets,
        distances=distances,
        radii=radii,
        strengths=strengths,
        kinds=kinds,
        directions=directions,
        min_ratio=min_ratio,
        min_ratio_gradient=min_ratio_gradient,
    )


def _potentials(active: ActiveSet, params: PotentialParams) -> NDArray[np.float64]:
    return active.strengths * pair_potentials(
        active.offsets,
        active.distances ** 2,
        active.radii,
        active.kinds,
        active.directions,
        params.saddle_variant,
        params.saddle_beta,
    )


def _alpha_value(delta, min_ratio, any_active, params: PotentialParams):
    """α from proximity, nearest radius ratio and activity; works on scalars and arrays."""
    if params.alpha_variant == "reciprocal":
        return np.minimum(1.0, params.proximity_scale / (delta + params.epsilon))
    if params.alpha_variant == "sigmoid":
        with np.errstate(over="ignore"):
            return 1.0 / (1.0 + np.exp(-params.sigmoid_beta * min_ratio))
    return np.where(any_active, params.fixed_alpha, 1.0)


def memory_potential(x: ArrayLike, memory: Memory, params: PotentialParams = DEFAULT_PARAMS) -> float:
    """V_mem(x) = Σ γ_i φ_{κ_i} over the active features."""
    active = active_set(memory, x)
    return float(np.sum(_potentials(active, params)))


def memory_potential_by_kind(
    x: ArrayLike,
    memory: Memory,
    params: PotentialParams = DEFAULT_PARAMS,
) -> dict:
    """V_mem(x) split by feature kind."""
    active = active_set(memory, x)
    contributions = _potentials(active, params)
    return {int(kind): float(contributions[active.kinds == int(kind)].sum()) for kind in FeatureKind}


def proximity(x: ArrayLike, memory: Memory) -> float:
    """δ(x) = Σ γ_i max(0, 1 − ‖x − m_i‖ / r_i)."""
    active = active_set(memory, x)
    return float(np.sum(active.strengths * np.maximum(0.0, 1.0 - active.distances / active.radii)))


def alpha(x: ArrayLike, memory: Memory, params: PotentialParams = DEFAULT_PARAMS) -> float:
    """Adaptive weight α(x) ∈ [0, 1]; 1 far from every feature."""
    active = active_set(memory, x)
    delta = float(np.sum(active.strengths * np.maximum(0.0, 1.0 - active.distances / active.radii)))
    return float(_alpha_value(delta, active.min_ratio, len(active) > 0, params))


def enhanced_value(
    x: ArrayLike,
    memory: Memory,
    base: ValueFunction,
    params: PotentialParams = DEFAULT_PARAMS,
) -> float:
    """Ṽ(x) = α V_base + (1 − α) V_mem."""
    point = as_state(x)
    active = active_set(memory, point)
    v_mem = float(np.sum(_potentials(active, params)))
    delta = float(np.sum(active.strengths * np.maximum(0.0, 1.0 - active.distances / active.radii)))
    a = float(_alpha_value(delta, active.min_ratio, len(active) > 0, params))
    return a * float(base(point)) + (1.0 - a) * v_mem


def memory_gradient(x: ArrayLike, memory: Memory, params: PotentialParams = DEFAULT_PARAMS) -> NDArray[np.float64]:
    """∇V_mem(x)."""
    active = active_set(memory, x)
    return _memory_gradient(active, params)


def _memory_gradient(active: ActiveSet, params: PotentialParams) -> NDArray[np.float64]:
    grads = pair_gradients(
        active.offsets,
        active.distances ** 2,
        active.radii,
        active.kinds,
        active.directions,
        params.saddle_variant,
        params.saddle_beta,
    )
    return np.sum(active.strengths[:, np.newaxis] * grads, axis=0)


def _alpha_gradient(active: ActiveSet, delta: float, params: PotentialParams) -> NDArray[np.float64]:
    n = active.min_ratio_gradient.size
    if params.alpha_variant == "reciprocal":
        denominator = delta + params.epsilon
        if params.proximity_scale / denominator >= 1.0:
            return np.zeros(n)
        ramp = (active.distances > 0.0) & (active.distances < active.radii)
        scale = np.zeros_like(active.distances)
        scale[ramp] = -active.strengths[ramp] / (active.distances[ramp] * active.radii[ramp])
        delta_gradient = np.sum(scale[:, np.newaxis] * active.offsets, axis=0)
        return -params.proximity_scale / (denominator * denominator) * delta_gradient
    if params.alpha_variant == "sigmoid":
        if not np.isfinite(active.min_ratio):
            return np.zeros(n)
        a = float(_alpha_value(delta, active.min_ratio, True, params))
        return a * (1.0 - a) * params.sigmoid_beta * active.min_ratio_gradient
    return np.zeros(n)


def enhanced_gradient(
    x: ArrayLike,
    memory: Memory,
    base: ValueFunction,
    base_grad: GradientFunction,
    params: PotentialParams = DEFAULT_PARAMS,
) -> NDArray[np.float64]:
    """∇Ṽ = α ∇V_base + (1 − α) ∇V_mem + ∇α (V_base − V_mem).

    Kinks of the clamps use the one-sided derivative from the interior.
    """
    point = as_state(x)
    active = active_set(memory, point)
    g_base = np.asarray(base_grad(point), dtype=np.float64)
    if len(active) == 0:
        return g_base

    v_mem = float(np.sum(_potentials(active, params)))
    delta = float(np.sum(active.strengths * np.maximum(0.0, 1.0 - active.distances / active.radii)))
    a = float(_alpha_value(delta, active.min_ratio, len(active) > 0, params))
    g_mem = _memory_gradient(active, params)
    g_alpha = _alpha_gradient(active, delta, params)
    return a * g_base + (1.0 - a) * g_mem + g_alpha * (float(base(point)) - v_mem)


@dataclass(frozen=True)
class FieldTerms:
    """Field quantities at a batch of points, shape (P,) each."""
    potential: NDArray[np.float64]
    proximity: NDArray[np.float64]
    alpha: NDArray[np.float64]

    @property
    def penalty(self) -> NDArray[np.float64]:
        """(1 − α) V_mem, the memory share of Ṽ."""
        return (1.0 - self.alpha) * self.potential


def evaluate_field(
    snapshot: MemorySnapshot,
    points: ArrayLike,
    params: PotentialParams = DEFAULT_PARAMS,
) -> FieldTerms:
    """Vectorized V_mem, δ and α over many points."""
    queries = np.asarray(points, dtype=np.float64)
    count = queries.shape[0]
    point_idx, feature_idx, distances = snapshot.active_pairs(queries)

    potential = np.zeros(count)
    delta = np.zeros(count)
    min_ratio = np.full(count, np.inf)
    if point_idx.size:
        radii = snapshot.radii[feature_idx]
        strengths = snapshot.strengths[feature_idx]
        phi = pair_potentials(
            queries[point_idx] - snapshot.positions[feature_idx],
            distances ** 2,
            radii,
            snapshot.kinds[feature_idx],
            snapshot.directions[feature_idx],
            params.saddle_variant,
            params.saddle_beta,
        )
        potential = np.bincount(point_idx, weights=strengths * phi, minlength=count)
        delta = np.bincount(point_idx, weights=strengths * np.maximum(0.0, 1.0 - distances / radii), minlength=count)
        np.minimum.at(min_ratio, point_idx, distances / radii)

    any_active = np.isfinite(min_ratio)
    alpha_values = np.asarray(_alpha_value(delta, min_ratio, any_active, params), dtype=np.float64)
    alpha_values = np.broadcast_to(alpha_values, (count,)).copy()
    return FieldTerms(potential=potential, proximity=delta, alpha=alpha_values)


class EnhancedValue:
    """Ṽ bound to a base value function, a memory snapshot and parameters."""

    def __init__(
        self,
        base: ValueFunction,
        memory: Memory,
        params: PotentialParams = DEFAULT_PARAMS,
        base_grad: Optional[GradientFunction] = None,
    ):
        self.base = base
        self.snapshot = _snapshot(memory)
        self.params = params
        self.base_grad = base_grad

    def __call__(self, x: ArrayLike) -> float:
        return enhanced_value(x, self.snapshot, self.base, self.params)

    def alpha(self, x: ArrayLike) -> float:
        return alpha(x, self.snapshot, self.params)

    def gradient(self, x: ArrayLike) -> NDArray[np.float64]:
        if self.base_grad is None:
            raise ContractViolation("EnhancedValue has no base gradient")
        return enhanced_gradient(x, self.snapshot, self.base, self.base_grad, self.params)
