"""
Receding-horizon MPPI controller.
"""
import logging
from dataclasses import dataclass, field
from time import perf_counter
from typing import Dict, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ContractViolation, NoFeasibleRolloutError
from ..core.models import CostModel, DynamicsModel
from ..core.types import ControlVector, StateVector, as_control, as_state
from ..monitoring.metrics import metrics
from .config import MppiConfig
from .rollout import CostAugmentation, RolloutBatch, evaluate_batch
from .sampling import sample_controls
from .weighting import effective_sample_size, mppi_weights, optimal_control

logger = logging.getLogger(__name__)


@dataclass
class NominalPlan:
    """Warm-start control sequence, shape (H, m)."""
    controls: NDArray[np.float64]

    @classmethod
    def constant(cls, control: ArrayLike, horizon: int) -> "NominalPlan":
        u = np.asarray(control, dtype=np.float64)
        return cls(controls=np.tile(u, (horizon, 1)))

    def shifted(self) -> "NominalPlan":
        """Drop the first control and repeat the last one."""
        controls = np.empty_like(self.controls)
        controls[:-1] = self.controls[1:]
        controls[-1] = self.controls[-1]
        return NominalPlan(controls=controls)


@dataclass(frozen=True)
class MppiDiagnostics:
    """Per-step record of one optimization.

    Attributes:
        costs: Total cost of every rollout
        weights: Normalized weights
        temperature: λ used for the weights
        effective_sample_size: 1 / Σ w²
        predicted_value: Weighted mean rollout cost, logged as V_pred
        infeasible: Number of rollouts carrying the +inf sentinel
        phase_times: Wall time in seconds per phase
    """
    costs: NDArray[np.float64]
    weights: NDArray[np.float64]
    temperature: float
    effective_sample_size: float
    predicted_value: float
    infeasible: int
    phase_times: Dict[str, float] = field(default_factory=dict)

    @property
    def wall_time(self) -> float:
        return sum(self.phase_times.values())


class MppiController:
    """Standard MPPI: sample, roll out, weight, average, shift."""

    variant = "mppi"

    def __init__(
        self,
        config: MppiConfig,
        model: DynamicsModel,
        cost: CostModel,
        seed: int = 0,
        default_control: Optional[ArrayLike] = None,
    ):
        if config.control_dim != model.control_dim:
            raise ContractViolation(
                f"config has control dimension {config.control_dim}, model expects {model.control_dim}"
            )
        self.config = config
        self.model = model
        self.cost = cost
        if default_control is None:
            default_control = np.zeros(model.control_dim)
        self.default_control = config.clip(as_control(default_control, model.control_dim))
        self.seed = seed
        self.reset(seed)

    def reset(self, seed: Optional[int] = None) -> None:
        """Restart the random stream and the warm start."""
        if seed is not None:
            self.seed = seed
        self.rng = np.random.default_rng(self.seed)
        self.plan = NominalPlan.constant(self.default_control, self.config.horizon)

    def retarget(self, model: DynamicsModel, cost: CostModel) -> None:
        """Swap in the task of the next step, keeping the warm start."""
        self.model = model
        self.cost = cost

    def step(self, x: ArrayLike) -> Tuple[ControlVector, MppiDiagnostics]:
        """Compute the control to apply at state x.

        Returns:
            First control of the optimized sequence and step diagnostics
        """
        state = as_state(x, self.model.state_dim)
        u0, diagnostics, _ = self._optimize(
            state,
            covariance=self.config.covariance,
            temperature=self.config.base_temperature,
        )
        metrics.record_step(self.variant, diagnostics.phase_times)
        return u0, diagnostics

    def _optimize(
        self,
        state: StateVector,
        covariance: NDArray[np.float64],
        temperature: float,
        bias: Optional[NDArray[np.float64]] = None,
        augment: Optional[CostAugmentation] = None,
    ) -> Tuple[ControlVector, MppiDiagnostics, RolloutBatch]:
        started = perf_counter()
        controls = sample_controls(self.config, self.plan.controls, covariance, self.rng, bias=bias)
        sampled = perf_counter()

        batch = evaluate_batch(self.model, self.cost, state, controls, augment=augment)
        rolled = perf_counter()

        infeasible = int(np.count_nonzero(~batch.feasible))
        metrics.record_infeasible(infeasible)
        try:
            weights = mppi_weights(batch.costs, temperature)
        except NoFeasibleRolloutError:
            logger.warning(f"All {batch.samples} rollouts infeasible at state {state.tolist()}")
            raise
        lower, upper = self.config.bounds
        sequence = optimal_control(batch, weights, lower, upper)
        u0 = sequence[0].copy()
        self.plan = NominalPlan(controls=sequence).shifted()
        finished = perf_counter()

        feasible = batch.feasible
        diagnostics = MppiDiagnostics(
            costs=batch.costs,
            weights=weights,
            temperature=temperature,
            effective_sample_size=effective_sample_size(weights),
            predicted_value=float(np.dot(weights[feasible], batch.costs[feasible])),
            infeasible=infeasible,
            phase_times={
                "sample": sampled - started,
                "rollout": rolled - sampled,
                "weighting": finished - rolled,
            },
        )
        return u0, diagnostics, batch
