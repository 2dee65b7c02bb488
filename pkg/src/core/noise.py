"""
Seeded Gaussian noise with a (possibly singular) covariance.
"""
from dataclasses import dataclass, field
from typing import List

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from .errors import ContractViolation

SYMMETRY_TOLERANCE = 1e-12
EIGENVALUE_TOLERANCE = 1e-10


def covariance_factor(covariance: ArrayLike) -> NDArray[np.float64]:
    """Return L with L Lᵀ = Σ for a symmetric positive semi-definite Σ.

    Cholesky is used when Σ is positive definite; otherwise the factor comes
    from an eigendecomposition with eigenvalues above -1e-10 clamped to zero.
    """
    sigma = np.atleast_2d(np.asarray(covariance, dtype=np.float64))
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise ContractViolation(f"covariance must be square, got shape {sigma.shape}")
    if not np.all(np.isfinite(sigma)):
        raise ContractViolation("covariance has non-finite entries")
    if np.max(np.abs(sigma - sigma.T), initial=0.0) > SYMMETRY_TOLERANCE:
        raise ContractViolation("covariance is not symmetric")
    try:
        return linalg.cholesky(sigma, lower=True)
    except linalg.LinAlgError:
        pass
    eigenvalues, eigenvectors = linalg.eigh(sigma)
    if eigenvalues.min(initial=0.0) < -EIGENVALUE_TOLERANCE:
        raise ContractViolation(
            f"covariance is not positive semi-definite (min eigenvalue {eigenvalues.min():.3e})"
        )
    return eigenvectors * np.sqrt(np.clip(eigenvalues, 0.0, None))


@dataclass(frozen=True)
class NoiseModel:
    """ε ~ N(0, Σ) with a fixed seed."""
    covariance: NDArray[np.float64]
    seed: int = 0
    factor: NDArray[np.float64] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sigma = np.atleast_2d(np.asarray(self.covariance, dtype=np.float64))
        object.__setattr__(self, "covariance", sigma)
        object.__setattr__(self, "factor", covariance_factor(sigma))

    @property
    def dim(self) -> int:
        return self.covariance.shape[0]


def seeded_gaussian(noise: NoiseModel, count: int) -> NDArray[np.float64]:
    """Draw ``count`` samples from N(0, Σ), reproducible for a given seed.

    Returns:
        Array of shape (count, n)
    """
    if count < 0:
        raise ContractViolation("count must be non-negative")
    rng = np.random.default_rng(noise.seed)
    standard = rng.standard_normal((count, noise.dim))
    return standard @ noise.factor.T


def spawn_streams(seed: int, count: int) -> List[np.random.Generator]:
    """Split one seed into independent generators, one per worker or rollout."""
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]
