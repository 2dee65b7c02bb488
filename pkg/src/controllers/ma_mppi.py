"""
Memory-augmented MPPI controller.
"""
import logging
from dataclasses import dataclass, field
from time import perf_counter
from typing import Dict, Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ContractViolation
from ..core.models import CostModel, DynamicsModel
from ..core.types import ControlVector, StateVector, as_state
from ..detection.detector import FeatureDetector
from ..envs.base import Environment
from ..memory.store import MemoryStore
from ..monitoring.metrics import metrics
from ..mppi.controller import MppiController, MppiDiagnostics
from ..mppi.rollout import CostAugmentation
from ..potential.adaptation import (
    MemoryCostAugmentation,
    covariance_scale,
    directional_bias,
    temperature_for_alpha,
)
from ..potential.field import active_set, alpha, memory_potential_by_kind
from .config import MaMppiConfig, apply_preset, default_config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepDiagnostics:
    """Per-step record of one MA-MPPI optimization.

    Attributes:
        mppi: Diagnostics of the underlying sampling step
        alpha: α(x_t)
        temperature: λ used for the weights
        memory_size: |M| after the memory update
        active_features: Features whose radius contains x_t
        stagnating: Stagnation flag from the detector
        candidate_kind: Kind of the candidate detected at this step, if any
        memory_outcome: What the store did with that candidate
        potential_by_kind: V_mem(x_t) split by feature kind
        phase_times: Wall time in seconds per phase
    """
    mppi: MppiDiagnostics
    alpha: float
    temperature: float
    memory_size: int
    active_features: int
    stagnating: bool
    candidate_kind: Optional[int] = None
    memory_outcome: Optional[str] = None
    potential_by_kind: Dict[int, float] = field(default_factory=dict)
    phase_times: Dict[str, float] = field(default_factory=dict)

    @property
    def predicted_value(self) -> float:
        return self.mppi.predicted_value

    @property
    def wall_time(self) -> float:
        return sum(self.phase_times.values())


class MaMppiController(MppiController):
    """MPPI whose sampling and costs are shaped by a memory of past traps.

    Each step observes x_t, updates the memory, adapts λ, Σ_u and the sampling
    mean at x_t, then runs the MPPI optimization with the memory term added to
    every rollout state.
    """

    variant = "ma-mppi"

    def __init__(
        self,
        config: MaMppiConfig,
        env: Environment,
        seed: int = 0,
        memory: Optional[MemoryStore] = None,
    ):
        self.ma_config = config
        self.env = env
        self.detector = FeatureDetector(
            config.detection,
            env.value,
            gradient=env.value_gradient if env.has_value_gradient else None,
            goal=env.goal,
        )
        self.memory = memory if memory is not None else MemoryStore(config.memory, state_dim=env.state_dim)
        if self.memory.state_dim not in (None, env.state_dim):
            raise ContractViolation(
                f"memory holds {self.memory.state_dim}-dimensional features, environment has {env.state_dim}"
            )
        super().__init__(config.mppi, env, env, seed=seed, default_control=env.default_control())

    def reset(self, seed: Optional[int] = None, fresh_memory: bool = False) -> None:
        """Restart the random stream, warm start and detector; memory is kept unless asked."""
        super().reset(seed)
        self.detector.reset()
        if fresh_memory:
            self.memory.clear()

    def retarget(self, model: DynamicsModel, cost: CostModel) -> None:
        super().retarget(model, cost)
        if isinstance(cost, Environment):
            self.env = cost
            self.detector.value = cost.value
            self.detector.gradient = cost.value_gradient if cost.has_value_gradient else None
            self.detector.goal = None if cost.goal is None else np.asarray(cost.goal, dtype=np.float64)

    def step(self, x: ArrayLike) -> Tuple[ControlVector, StepDiagnostics]:
        """Compute the control to apply at state x."""
        state = as_state(x, self.model.state_dim)
        config = self.ma_config
        if not config.memory_enabled:
            u0, diagnostics = super().step(state)
            return u0, StepDiagnostics(
                mppi=diagnostics,
                alpha=1.0,
                temperature=diagnostics.temperature,
                memory_size=0,
                active_features=0,
                stagnating=False,
                phase_times=dict(diagnostics.phase_times),
            )

        started = perf_counter()
        detection = self.detector.observe(state)
        outcome = self.memory.update(state, detection.candidate, detection.stagnating)
        updated = perf_counter()

        snapshot = self.memory.snapshot()
        temperature = self.config.base_temperature
        covariance = self.config.covariance
        bias: Optional[NDArray[np.float64]] = None
        augment: Optional[CostAugmentation] = None
        a = 1.0
        active = 0
        by_kind: Dict[int, float] = {}
        if len(snapshot) > 0:
            params = config.potential
            a = alpha(state, snapshot, params)
            active = len(active_set(snapshot, state))
            by_kind = memory_potential_by_kind(state, snapshot, params)
            if params.adapt_temperature:
                temperature = temperature_for_alpha(a, temperature, params.temperature_gain)
            if params.adapt_covariance:
                covariance = covariance * covariance_scale(a, params)
            if params.directional_bias:
                bias = self._bias(state, snapshot, covariance)
            if config.memory_weight > 0.0:
                augment = MemoryCostAugmentation(snapshot, params, config.memory_weight)
        shaped = perf_counter()

        u0, diagnostics, _ = self._optimize(
            state,
            covariance=covariance,
            temperature=temperature,
            bias=bias,
            augment=augment,
        )
        phase_times = {
            **diagnostics.phase_times,
            "memory": updated - started,
            "potential": shaped - updated,
        }
        metrics.record_step(self.variant, phase_times)
        return u0, StepDiagnostics(
            mppi=diagnostics,
            alpha=a,
            temperature=temperature,
            memory_size=len(self.memory),
            active_features=active,
            stagnating=detection.stagnating,
            candidate_kind=None if detection.candidate is None else int(detection.candidate.kind),
            memory_outcome=None if outcome is None else outcome.value,
            potential_by_kind=by_kind,
            phase_times=phase_times,
        )

    def _bias(
        self,
        state: StateVector,
        snapshot,
        covariance: NDArray[np.float64],
    ) -> Optional[NDArray[np.float64]]:
        hint = directional_bias(state, snapshot, self.env.state_to_control)
        if hint is None:
            return None
        std = np.sqrt(np.diag(covariance))
        return self.ma_config.potential.bias_gain * std * hint


Controller = Union[MppiController, MaMppiController]


def build_controller(
    env: Environment,
    preset: str = "ma-mppi",
    config: Optional[MaMppiConfig] = None,
    seed: int = 0,
    memory: Optional[MemoryStore] = None,
) -> Controller:
    """Controller for ``env`` in the named variant.

    The ``mppi`` preset yields a plain ``MppiController``; every other preset
    an ``MaMppiController``.
    """
    base = config if config is not None else default_config(env)
    if preset == "mppi":
        mppi_config = apply_preset(base, preset).mppi
        return MppiController(mppi_config, env, env, seed=seed, default_control=env.default_control())
    return MaMppiController(apply_preset(base, preset), env, seed=seed, memory=memory)
