"""
Memory dynamics parameters and named presets.
"""
from typing import Dict

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.errors import ConfigurationError


class MemoryParams(BaseModel):
    """Parameters of memory insertion, consolidation and strength dynamics.

    Attributes:
        initial_strength: γ₀ of a new feature
        max_strength: γ_max cap applied to increments and merges
        strength_increment: Δγ added on re-encounter while stagnating
        decay: β_decay applied per step once a feature is neglected
        decay_after: t_threshold, steps outside a feature before decay starts
        min_strength: γ_min, features below it are pruned
        merge_ratio: θ_merge on ‖m_new − m_i‖ / r_i
        novelty_distance: θ_dist, minimum distance for a new feature
        capacity: Maximum number of stored features
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    initial_strength: float = Field(default=1.0, gt=0.0)
    max_strength: float = Field(default=5.0, gt=0.0)
    strength_increment: float = Field(default=0.1, ge=0.0)
    decay: float = Field(default=0.99, gt=0.0, lt=1.0)
    decay_after: int = Field(default=100, ge=0)
    min_strength: float = Field(default=0.1, gt=0.0)
    merge_ratio: float = Field(default=1.5, gt=0.0)
    novelty_distance: float = Field(default=0.1, ge=0.0)
    capacity: int = Field(default=100, ge=1)

    @model_validator(mode="after")
    def validate_strength_order(self) -> "MemoryParams":
        if not self.min_strength < self.initial_strength <= self.max_strength:
            raise ValueError("strengths must satisfy min_strength < initial_strength <= max_strength")
        return self


MEMORY_PRESETS: Dict[str, MemoryParams] = {
    "standard": MemoryParams(),
    "robot": MemoryParams(decay=0.95),
}


def memory_preset(name: str) -> MemoryParams:
    """Look up a named memory preset."""
    try:
        return MEMORY_PRESETS[name]
    except KeyError:
        raise ConfigurationError(f"Unknown memory preset '{name}'", fields=["memory.preset"])
