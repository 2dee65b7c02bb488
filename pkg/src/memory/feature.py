"""
Memory features and their consolidation rule.
"""
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from ..core.errors import ContractViolation
from ..detection.classifier import UNIT_TOLERANCE, CandidateFeature, FeatureKind

DIRECTION_FLOOR = 1e-12


@dataclass(frozen=True)
class MemoryFeature:
    """One stored topological feature (m, r, γ, κ, d).

    Attributes:
        id: Store-assigned identifier, stable across merges
        position: Center m
        radius: Influence radius r
        strength: γ
        kind: κ
        direction: Unit vector d for kinds 2 and 3, None for local minima
        last_inside_step: Last store step at which the system was within r
        created_step: Store step of insertion
    """
    id: int
    position: NDArray[np.float64]
    radius: float
    strength: float
    kind: FeatureKind
    direction: Optional[NDArray[np.float64]] = None
    last_inside_step: int = 0
    created_step: int = 0

    def __post_init__(self):
        position = np.asarray(self.position, dtype=np.float64)
        if position.ndim != 1 or not np.all(np.isfinite(position)):
            raise ContractViolation("feature position must be a finite vector")
        object.__setattr__(self, "position", position)
        object.__setattr__(self, "kind", FeatureKind(self.kind))
        if not self.radius > 0.0:
            raise ContractViolation(f"feature radius must be positive, got {self.radius}")
        if not self.strength > 0.0:
            raise ContractViolation(f"feature strength must be positive, got {self.strength}")
        if self.kind == FeatureKind.LOCAL_MINIMUM:
            if self.direction is not None:
                raise ContractViolation("local-minimum features carry no direction")
            return
        if self.direction is None:
            raise ContractViolation(f"kind {int(self.kind)} features require a direction")
        direction = np.asarray(self.direction, dtype=np.float64)
        if direction.shape != position.shape or abs(np.linalg.norm(direction) - 1.0) > UNIT_TOLERANCE:
            raise ContractViolation("feature direction must be a unit vector of the state dimension")
        object.__setattr__(self, "direction", direction)

    @classmethod
    def from_candidate(cls, candidate: CandidateFeature, feature_id: int, strength: float, step: int) -> "MemoryFeature":
        return cls(
            id=feature_id,
            position=candidate.position,
            radius=candidate.radius,
            strength=strength,
            kind=candidate.kind,
            direction=candidate.direction,
            last_inside_step=step,
            created_step=step,
        )

    def distance(self, x: NDArray[np.float64]) -> float:
        return float(np.linalg.norm(np.asarray(x, dtype=np.float64) - self.position))

    def contains(self, x: NDArray[np.float64]) -> bool:
        return self.distance(x) <= self.radius

    def with_strength(self, strength: float) -> "MemoryFeature":
        return replace(self, strength=strength)


def merge(a: MemoryFeature, b: MemoryFeature, max_strength: float) -> MemoryFeature:
    """Consolidate two same-kind features into one that keeps a's id.

    Position is the strength-weighted mean, the radius grows to cover both,
    strengths add up to γ_max and directions are strength-weighted. An
    (almost) cancelling direction sum keeps a's direction.
    """
    if a.kind != b.kind:
        raise ContractViolation(f"cannot merge kind {int(a.kind)} with kind {int(b.kind)}")
    total = a.strength + b.strength
    position = (a.strength * a.position + b.strength * b.position) / total
    separation = float(np.linalg.norm(a.position - b.position))
    radius = max(a.radius, b.radius, separation / 2.0 + min(a.radius, b.radius))

    direction = None
    if a.direction is not None and b.direction is not None:
        combined = a.strength * a.direction + b.strength * b.direction
        norm = float(np.linalg.norm(combined))
        direction = a.direction if norm < DIRECTION_FLOOR else combined / norm

    return MemoryFeature(
        id=a.id,
        position=position,
        radius=radius,
        strength=min(max_strength, total),
        kind=a.kind,
        direction=direction,
        last_inside_step=max(a.last_inside_step, b.last_inside_step),
        created_step=min(a.created_step, b.created_step),
    )
