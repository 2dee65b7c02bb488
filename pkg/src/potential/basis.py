"""
Per-feature basis potentials and their gradients.

The pair kernels work on arrays of (point, feature) pairs: ``offsets`` holds
x − m per pair and every other argument is aligned with it. All potentials are
zero outside the influence radius.
"""
import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ContractViolation
from ..detection.classifier import FeatureKind

AXIAL = "axial"
RATIO = "ratio"


def _check_radius(r: float) -> None:
    if not r > 0.0:
        raise ContractViolation(f"radius must be positive, got {r}")


def phi1(x: ArrayLike, m: ArrayLike, r: float) -> float:
    """Repulsive bump (1 − ‖x−m‖²/r²)² inside the radius."""
    _check_radius(r)
    offset = np.asarray(x, dtype=np.float64) - np.asarray(m, dtype=np.float64)
    w = 1.0 - float(np.dot(offset, offset)) / (r * r)
    return w * w if w > 0.0 else 0.0


def phi2(x: ArrayLike, m: ArrayLike, r: float, d: ArrayLike) -> float:
    """Directional ramp max(0, (1 − ‖x−m‖²/r²) · d·(x−m))."""
    _check_radius(r)
    offset = np.asarray(x, dtype=np.float64) - np.asarray(m, dtype=np.float64)
    w = 1.0 - float(np.dot(offset, offset)) / (r * r)
    if w <= 0.0:
        return 0.0
    return max(0.0, w * float(np.dot(np.asarray(d, dtype=np.float64), offset)))


def phi3(x: ArrayLike, m: ArrayLike, r: float, d: ArrayLike, variant: str = AXIAL, beta: float = 0.5) -> float:
    """Saddle potential along d.

    axial: max(0, w · ((d·δ)² − ‖(I − ddᵀ)δ‖²))
    ratio: max(0, w · ((d·δ)²/‖δ‖² − β)), zero at δ = 0
    """
    _check_radius(r)
    offset = np.asarray(x, dtype=np.float64) - np.asarray(m, dtype=np.float64)
    squared = float(np.dot(offset, offset))
    w = 1.0 - squared / (r * r)
    if w <= 0.0:
        return 0.0
    projection = float(np.dot(np.asarray(d, dtype=np.float64), offset))
    if variant == AXIAL:
        shape = 2.0 * projection * projection - squared
    elif variant == RATIO:
        if squared == 0.0:
            return 0.0
        shape = projection * projection / squared - beta
    else:
        raise ContractViolation(f"unknown saddle variant '{variant}'")
    return max(0.0, w * shape)


def pair_potentials(
    offsets: NDArray[np.float64],
    squared: NDArray[np.float64],
    radii: NDArray[np.float64],
    kinds: NDArray[np.int64],
    directions: NDArray[np.float64],
    saddle_variant: str = AXIAL,
    saddle_beta: float = 0.5,
) -> NDArray[np.float64]:
    """φ_κ for every pair (unweighted)."""
    w = np.maximum(0.0, 1.0 - squared / (radii * radii))
    projection = np.einsum("ij,ij->i", offsets, directions)
    values = np.zeros_like(w)

    minimum = kinds == FeatureKind.LOCAL_MINIMUM
    values[minimum] = w[minimum] ** 2

    plateau = kinds == FeatureKind.LOW_GRADIENT
    values[plateau] = np.maximum(0.0, w[plateau] * projection[plateau])

    saddle = kinds == FeatureKind.HIGH_CURVATURE
    if np.any(saddle):
        values[saddle] = np.maximum(0.0, w[saddle] * _saddle_shape(
            projection[saddle], squared[saddle], saddle_variant, saddle_beta
        ))
    return values


def _saddle_shape(projection, squared, variant, beta):
    if variant == AXIAL:
        return 2.0 * projection * projection - squared
    with np.errstate(divide="ignore", invalid="ignore"):
        shape = np.where(squared > 0.0, projection * projection / squared - beta, 0.0)
    return shape


def pair_gradients(
    offsets: NDArray[np.float64],
    squared: NDArray[np.float64],
    radii: NDArray[np.float64],
    kinds: NDArray[np.int64],
    directions: NDArray[np.float64],
    saddle_variant: str = AXIAL,
    saddle_beta: float = 0.5,
) -> NDArray[np.float64]:
    """∇φ_κ with respect to x for every pair (unweighted), shape (A, n).

    Clamped regions contribute zero, which is the one-sided derivative from the
    interior at the clamp boundaries.
    """
    r2 = (radii * radii)[:, np.newaxis]
    w = (1.0 - squared / (radii * radii))[:, np.newaxis]
    inside = w[:, 0] > 0.0
    projection = np.einsum("ij,ij->i", offsets, directions)[:, np.newaxis]
    grads = np.zeros_like(offsets)

    minimum = inside & (kinds == FeatureKind.LOCAL_MINIMUM)
    grads[minimum] = (-4.0 * w * offsets / r2)[minimum]

    plateau = inside & (kinds == FeatureKind.LOW_GRADIENT) & (projection[:, 0] > 0.0)
    grads[plateau] = (-2.0 * projection * offsets / r2 + w * directions)[plateau]

    saddle = inside & (kinds == FeatureKind.HIGH_CURVATURE)
    if np.any(saddle):
        sq = squared[:, np.newaxis]
        if saddle_variant == AXIAL:
            shape = 2.0 * projection * projection - sq
            shape_grad = 4.0 * projection * directions - 2.0 * offsets
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                shape = np.where(sq > 0.0, projection * projection / sq - saddle_beta, 0.0)
                shape_grad = np.where(
                    sq > 0.0,
                    2.0 * projection * directions / sq - 2.0 * projection * projection * offsets / (sq * sq),
                    0.0,
                )
        active = saddle & (shape[:, 0] > 0.0)
        grads[active] = (-2.0 * shape * offsets / r2 + w * shape_grad)[active]
    return grads
