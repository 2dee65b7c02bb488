"""
Fixed-capacity window of recent states.
"""
from collections import deque
from typing import Deque, List, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ContractViolation


class StateWindow:
    """Ring buffer of the last K_w (step, state) pairs in chronological order."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ContractViolation("window capacity must be positive")
        self.capacity = capacity
        self._entries: Deque[Tuple[int, NDArray[np.float64]]] = deque(maxlen=capacity)

    def push(self, step: int, state: ArrayLike) -> None:
        if self._entries and step <= self._entries[-1][0]:
            raise ContractViolation(f"window step {step} is not after {self._entries[-1][0]}")
        self._entries.append((step, np.array(state, dtype=np.float64)))

    def clear(self) -> None:
        self._entries.clear()

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def full(self) -> bool:
        return len(self._entries) == self.capacity

    @property
    def steps(self) -> List[int]:
        return [step for step, _ in self._entries]

    @property
    def states(self) -> NDArray[np.float64]:
        """States as a (len, n) array."""
        return np.stack([state for _, state in self._entries])

    @property
    def latest(self) -> NDArray[np.float64]:
        return self._entries[-1][1]

    def mean(self) -> NDArray[np.float64]:
        return self.states.mean(axis=0)

    def spread(self) -> float:
        """Largest distance of a window state from the window mean."""
        states = self.states
        return float(np.max(np.linalg.norm(states - states.mean(axis=0), axis=1)))
