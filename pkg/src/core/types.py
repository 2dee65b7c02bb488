"""
Domain types shared by every environment and controller.

States and controls are plain float64 numpy vectors; the helpers here enforce
their contracts at module boundaries.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ContractViolation

StateVector = NDArray[np.float64]
ControlVector = NDArray[np.float64]


def as_vector(values: ArrayLike, dim: Optional[int] = None, name: str = "vector") -> NDArray[np.float64]:
    """Coerce values into a finite 1-D float64 vector.

    Args:
        values: Vector entries
        dim: Required length, if any
        name: Name used in error messages

    Returns:
        A fresh float64 array
    """
    vector = np.array(values, dtype=np.float64)
    if vector.ndim != 1 or vector.size == 0:
        raise ContractViolation(f"{name} must be a non-empty 1-D vector, got shape {vector.shape}")
    if dim is not None and vector.size != dim:
        raise ContractViolation(f"{name} has length {vector.size}, expected {dim}")
    if not np.all(np.isfinite(vector)):
        raise ContractViolation(f"{name} has non-finite entries")
    return vector


def as_state(values: ArrayLike, dim: Optional[int] = None) -> StateVector:
    """Validate a state vector."""
    return as_vector(values, dim, name="state")


def as_control(values: ArrayLike, dim: Optional[int] = None) -> ControlVector:
    """Validate a control vector."""
    return as_vector(values, dim, name="control")


@dataclass(frozen=True)
class Trajectory:
    """A rollout: H+1 states and the H controls that produced them."""
    states: NDArray[np.float64]
    controls: NDArray[np.float64]

    def __post_init__(self):
        states = np.asarray(self.states, dtype=np.float64)
        controls = np.asarray(self.controls, dtype=np.float64)
        if states.ndim != 2 or controls.ndim != 2:
            raise ContractViolation("trajectory states and controls must be 2-D arrays")
        if states.shape[0] != controls.shape[0] + 1:
            raise ContractViolation(
                f"trajectory has {states.shape[0]} states for {controls.shape[0]} controls"
            )
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "controls", controls)

    @property
    def horizon(self) -> int:
        return self.controls.shape[0]

    @property
    def root(self) -> StateVector:
        return self.states[0]
