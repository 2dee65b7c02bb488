"""
Configuration of the standard MPPI controller.
"""
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import linalg


class MppiConfig(BaseModel):
    """Sampling and weighting parameters shared by MPPI and MA-MPPI.

    Attributes:
        samples: Number of sampled control sequences K
        horizon: Rollout length H in control steps
        base_temperature: Softmax temperature λ₀
        control_covariance: Nominal sampling covariance Σ_{u,0} (m×m, SPD)
        control_lower: Per-dimension lower control bound, or None for unbounded
        control_upper: Per-dimension upper control bound, or None for unbounded
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    samples: int = Field(default=1000, ge=1)
    horizon: int = Field(default=20, ge=1)
    base_temperature: float = Field(default=0.1, gt=0.0)
    control_covariance: List[List[float]] = Field(default_factory=lambda: [[1.0]])
    control_lower: Optional[List[float]] = None
    control_upper: Optional[List[float]] = None

    @model_validator(mode="after")
    def validate_covariance_and_bounds(self) -> "MppiConfig":
        sigma = np.asarray(self.control_covariance, dtype=np.float64)
        if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.size == 0:
            raise ValueError("control_covariance must be a non-empty square matrix")
        if not np.all(np.isfinite(sigma)) or not np.allclose(sigma, sigma.T, rtol=0.0, atol=1e-12):
            raise ValueError("control_covariance must be finite and symmetric")
        try:
            linalg.cholesky(sigma, lower=True)
        except linalg.LinAlgError as e:
            raise ValueError("control_covariance must be positive definite") from e

        m = sigma.shape[0]
        for name, bound in (("control_lower", self.control_lower), ("control_upper", self.control_upper)):
            if bound is not None and len(bound) != m:
                raise ValueError(f"{name} has length {len(bound)}, expected {m}")
        if self.control_lower is not None and self.control_upper is not None:
            if any(lo >= hi for lo, hi in zip(self.control_lower, self.control_upper)):
                raise ValueError("control bounds require lower < upper in every dimension")
        return self

    @property
    def control_dim(self) -> int:
        return len(self.control_covariance)

    @property
    def covariance(self) -> NDArray[np.float64]:
        return np.asarray(self.control_covariance, dtype=np.float64)

    @property
    def bounds(self) -> Tuple[Optional[NDArray[np.float64]], Optional[NDArray[np.float64]]]:
        lower = None if self.control_lower is None else np.asarray(self.control_lower, dtype=np.float64)
        upper = None if self.control_upper is None else np.asarray(self.control_upper, dtype=np.float64)
        return lower, upper

    def clip(self, controls: NDArray[np.float64]) -> NDArray[np.float64]:
        """Clip controls of any leading shape to the configured bounds."""
        lower, upper = self.bounds
        if lower is None and upper is None:
            return controls
        return np.clip(controls, lower, upper)
