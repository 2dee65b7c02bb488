"""
Batched noise-free rollouts and their costs.
"""
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ContractViolation
from ..core.models import CostModel, DynamicsModel
from ..core.types import Trajectory, as_state

# Extra per-rollout cost computed from the (K, H+1, n) state tensor
CostAugmentation = Callable[[NDArray[np.float64]], NDArray[np.float64]]


@dataclass(frozen=True)
class RolloutBatch:
    """K sampled control sequences with their trajectories and total costs.

    Attributes:
        controls: Shape (K, H, m)
        states: Shape (K, H+1, n); states[:, 0] is the common root
        costs: Shape (K,); +inf marks an infeasible rollout
    """
    controls: NDArray[np.float64]
    states: NDArray[np.float64]
    costs: NDArray[np.float64]

    @property
    def samples(self) -> int:
        return self.controls.shape[0]

    @property
    def horizon(self) -> int:
        return self.controls.shape[1]

    @property
    def feasible(self) -> NDArray[np.bool_]:
        return np.isfinite(self.costs)

    def trajectory(self, k: int) -> Trajectory:
        return Trajectory(states=self.states[k], controls=self.controls[k])

    @property
    def trajectories(self) -> List[Trajectory]:
        return [self.trajectory(k) for k in range(self.samples)]


def evaluate_batch(
    model: DynamicsModel,
    cost: CostModel,
    x0: ArrayLike,
    controls: ArrayLike,
    augment: Optional[CostAugmentation] = None,
) -> RolloutBatch:
    """Simulate every control sequence from x0 and score it.

    Rollouts advance together as one (K, n) array per step. A rollout whose
    states or costs turn non-finite gets the +inf sentinel without affecting
    the others.

    Args:
        model: Dynamics model (vectorized over the batch)
        cost: Cost model (vectorized over the batch)
        x0: Root state
        controls: Control sequences, shape (K, H, m)
        augment: Optional extra cost per rollout, computed from all states

    Returns:
        The scored batch
    """
    root = as_state(x0, model.state_dim)
    sequences = np.asarray(controls, dtype=np.float64)
    if sequences.ndim != 3 or sequences.shape[2] != model.control_dim:
        raise ContractViolation(
            f"controls must have shape (K, H, {model.control_dim}), got {sequences.shape}"
        )
    k, horizon, _ = sequences.shape

    states = np.empty((k, horizon + 1, model.state_dim), dtype=np.float64)
    states[:, 0] = root
    totals = np.zeros(k, dtype=np.float64)
    with np.errstate(all="ignore"):
        for t in range(horizon):
            totals += cost.stage_cost(states[:, t], sequences[:, t])
            states[:, t + 1] = model.step(states[:, t], sequences[:, t])
        totals += cost.terminal_cost(states[:, -1])
        if augment is not None:
            totals += augment(states)
    totals[~np.isfinite(totals)] = np.inf

    return RolloutBatch(controls=sequences, states=states, costs=totals)
