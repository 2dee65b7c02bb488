"""
Memory potential and adaptation parameters.
"""
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class PotentialParams(BaseModel):
    """Parameters turning memory into value shaping and sampling adaptation.

    Attributes:
        proximity_scale: δ₀ in α = min(1, δ₀ / (δ + ε))
        epsilon: ε floor of the reciprocal weight
        temperature_gain: η in λ = λ₀ (1 + η (1 − α))
        covariance_gain: μ in Σ_u = Σ_{u,0} (1 + μ (1 − α))
        saddle_beta: β of the ratio saddle potential
        sigmoid_beta: Sharpness of the sigmoid weight
        alpha_variant: reciprocal (default), sigmoid, or constant inside features
        fixed_alpha: α used by the constant variant inside any feature
        saddle_variant: axial (d·δ)² − ‖(I − ddᵀ)δ‖², or ratio (d·δ)²/‖δ‖² − β
        covariance_mode: memory scales Σ by 1 + μ(1 − α); temperature by λ/λ₀
        adapt_temperature: Use λ(x) instead of λ₀
        adapt_covariance: Use Σ_u(x) instead of Σ_{u,0}
        directional_bias: Shift the sampling mean along low-gradient directions
        bias_gain: Bias magnitude in units of the per-dimension control std
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    proximity_scale: float = Field(default=0.5, gt=0.0)
    epsilon: float = Field(default=1e-6, gt=0.0)
    temperature_gain: float = Field(default=2.0, ge=0.0)
    covariance_gain: float = Field(default=1.0, ge=0.0)
    saddle_beta: float = Field(default=0.5, gt=0.0, lt=1.0)
    sigmoid_beta: float = Field(default=5.0, gt=0.0)
    alpha_variant: Literal["reciprocal", "sigmoid", "constant"] = "reciprocal"
    fixed_alpha: float = Field(default=0.5, ge=0.0, le=1.0)
    saddle_variant: Literal["axial", "ratio"] = "axial"
    covariance_mode: Literal["memory", "temperature"] = "memory"
    adapt_temperature: bool = True
    adapt_covariance: bool = True
    directional_bias: bool = True
    bias_gain: float = Field(default=0.5, ge=0.0)
