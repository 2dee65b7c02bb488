"""
Memory potentials, the enhanced value function and sampling adaptation.
"""
from .adaptation import (
    MemoryCostAugmentation,
    adaptive_covariance,
    adaptive_temperature,
    covariance_scale,
    directional_bias,
    temperature_for_alpha,
)
from .basis import pair_gradients, pair_potentials, phi1, phi2, phi3
from .descent import noisy_descent
from .field import (
    ActiveSet,
    EnhancedValue,
    FieldTerms,
    active_set,
    alpha,
    enhanced_gradient,
    enhanced_value,
    evaluate_field,
    memory_gradient,
    memory_potential,
    memory_potential_by_kind,
    proximity,
)
from .params import PotentialParams

__all__ = [
    "ActiveSet",
    "EnhancedValue",
    "FieldTerms",
    "MemoryCostAugmentation",
    "PotentialParams",
    "active_set",
    "adaptive_covariance",
    "adaptive_temperature",
    "alpha",
    "covariance_scale",
    "directional_bias",
    "enhanced_gradient",
    "enhanced_value",
    "evaluate_field",
    "memory_gradient",
    "memory_potential",
    "memory_potential_by_kind",
    "noisy_descent",
    "pair_gradients",
    "pair_potentials",
    "phi1",
    "phi2",
    "phi3",
    "proximity",
    "temperature_for_alpha",
]
