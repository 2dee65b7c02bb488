"""
Closed-loop episode execution and episode logs.
"""
import json
import logging
import math
from pathlib import Path
from time import perf_counter
from typing import Dict, List, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from opentelemetry import trace
from pydantic import BaseModel, ConfigDict, Field

from ..core.errors import ContractViolation, NoFeasibleRolloutError
from ..core.types import as_state
from ..envs.base import Environment
from ..memory.persistence import save_memory
from ..monitoring.metrics import metrics
from ..mppi.controller import MppiDiagnostics
from .ma_mppi import Controller, MaMppiController, StepDiagnostics

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)


class StepRecord(BaseModel):
    """One control step of an episode."""
    model_config = ConfigDict(extra="forbid")

    step: int
    time: float
    state: List[float]
    control: List[float]
    cost: float
    reward: float
    value: float
    alpha: float = 1.0
    temperature: float
    memory_size: int = 0
    active_features: int = 0
    stagnating: bool = False
    candidate_kind: Optional[int] = None
    predicted_value: float
    effective_sample_size: float
    infeasible: int = 0
    potential_by_kind: Dict[int, float] = Field(default_factory=dict)
    wall_time: float = Field(ge=0.0)
    collision: bool = False
    success: bool = False


class EpisodeLog(BaseModel):
    """Per-step records of one closed-loop episode."""
    model_config = ConfigDict(extra="forbid")

    environment: str
    variant: str
    seed: int
    horizon: int = Field(default=1, ge=1)
    records: List[StepRecord] = Field(default_factory=list)
    diverged: bool = False
    memory_kinds: Dict[int, int] = Field(default_factory=dict)
    config_hash: Optional[str] = None
    goal_value: Optional[float] = None

    def __len__(self) -> int:
        return len(self.records)

    @property
    def states(self) -> NDArray[np.float64]:
        return np.array([r.state for r in self.records], dtype=np.float64)

    @property
    def controls(self) -> NDArray[np.float64]:
        return np.array([r.control for r in self.records], dtype=np.float64)

    @property
    def costs(self) -> NDArray[np.float64]:
        return np.array([r.cost for r in self.records], dtype=np.float64)

    @property
    def rewards(self) -> NDArray[np.float64]:
        return np.array([r.reward for r in self.records], dtype=np.float64)

    @property
    def predicted_values(self) -> NDArray[np.float64]:
        return np.array([r.predicted_value for r in self.records], dtype=np.float64)

    @property
    def cumulative_reward(self) -> float:
        return math.fsum(r.reward for r in self.records)

    @property
    def cumulative_cost(self) -> float:
        return math.fsum(r.cost for r in self.records)

    @property
    def collided(self) -> bool:
        return any(r.collision for r in self.records)

    @property
    def succeeded(self) -> bool:
        return any(r.success for r in self.records)

    @property
    def wall_time(self) -> float:
        return math.fsum(r.wall_time for r in self.records)

    def to_jsonl(self) -> str:
        """Header line with episode fields, then one line per step."""
        header = self.model_dump(exclude={"records"})
        lines = [json.dumps({"episode": header}, sort_keys=True)]
        lines.extend(r.model_dump_json() for r in self.records)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "EpisodeLog":
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise ContractViolation("empty episode log")
        header = json.loads(lines[0])["episode"]
        records = [StepRecord.model_validate_json(line) for line in lines[1:]]
        return cls(**header, records=records)

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_jsonl())
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "EpisodeLog":
        return cls.from_jsonl(Path(path).read_text())


def _diagnostic_fields(diagnostics: Union[MppiDiagnostics, StepDiagnostics]) -> dict:
    if isinstance(diagnostics, StepDiagnostics):
        inner = diagnostics.mppi
        return {
            "alpha": diagnostics.alpha,
            "temperature": diagnostics.temperature,
            "memory_size": diagnostics.memory_size,
            "active_features": diagnostics.active_features,
            "stagnating": diagnostics.stagnating,
            "candidate_kind": diagnostics.candidate_kind,
            "predicted_value": inner.predicted_value,
            "effective_sample_size": inner.effective_sample_size,
            "infeasible": inner.infeasible,
            "potential_by_kind": diagnostics.potential_by_kind,
        }
    return {
        "temperature": diagnostics.temperature,
        "predicted_value": diagnostics.predicted_value,
        "effective_sample_size": diagnostics.effective_sample_size,
        "infeasible": diagnostics.infeasible,
    }


def run_episode(
    env: Environment,
    ctrl: Controller,
    steps: int,
    seed: int,
    initial_state: Optional[ArrayLike] = None,
    process_noise: float = 0.0,
    persist_path: Optional[Union[str, Path]] = None,
    stop_on_success: bool = False,
) -> EpisodeLog:
    """Run the controller in closed loop on the environment.

    The controller is reset with ``seed`` (an MA-MPPI controller keeps its
    memory). The start state is drawn from the environment with the same seed
    unless given. A non-finite state or a batch without any feasible rollout
    ends the episode with ``diverged`` set.

    Args:
        env: Environment to control
        ctrl: MPPI or MA-MPPI controller built for ``env``
        steps: Maximum number of control steps, ≥ 1
        seed: Seed of the controller stream, the start state and process noise
        initial_state: Optional explicit start state
        process_noise: Std of additive Gaussian state noise applied after each step
        persist_path: Where to save the memory at episode end, if any
        stop_on_success: End the episode at the first successful state

    Returns:
        The episode log
    """
    if steps < 1:
        raise ContractViolation(f"an episode needs at least one step, got {steps}")
    if process_noise < 0.0:
        raise ContractViolation(f"process noise must be non-negative, got {process_noise}")

    rng = np.random.default_rng(seed)
    ctrl.reset(seed)
    x = env.initial_state(rng) if initial_state is None else as_state(initial_state, env.state_dim)
    goal = env.goal
    log = EpisodeLog(
        environment=env.name,
        variant=ctrl.variant,
        seed=seed,
        horizon=ctrl.config.horizon,
        goal_value=None if goal is None else float(env.value(goal)),
    )
    task = env
    if ctrl.model is not env:
        ctrl.retarget(env, env)

    with tracer.start_as_current_span("episode") as span:
        span.set_attribute("episode.environment", env.name)
        span.set_attribute("episode.variant", ctrl.variant)
        span.set_attribute("episode.seed", seed)
        for t in range(steps):
            retargeted = task.retarget(x)
            if retargeted is not task:
                task = retargeted
                ctrl.retarget(task, task)

            started = perf_counter()
            try:
                u, diagnostics = ctrl.step(x)
            except NoFeasibleRolloutError:
                logger.warning(f"Episode seed {seed} ended at step {t}: no feasible rollout")
                log.diverged = True
                break
            wall_time = perf_counter() - started

            cost = float(task.stage_cost(x, u))
            log.records.append(StepRecord(
                step=t,
                time=t * task.dt,
                state=x.tolist(),
                control=u.tolist(),
                cost=cost,
                reward=-cost,
                value=float(task.value(x)),
                wall_time=wall_time,
                collision=task.in_collision(x),
                success=task.is_success(x),
                **_diagnostic_fields(diagnostics),
            ))

            with np.errstate(all="ignore"):
                x_next = np.asarray(task.step(x, u), dtype=np.float64)
                if process_noise > 0.0:
                    x_next = x_next + process_noise * rng.standard_normal(x_next.shape)
            if not np.all(np.isfinite(x_next)):
                logger.warning(f"Episode seed {seed} diverged at step {t}")
                log.diverged = True
                break
            x = x_next
            if stop_on_success and log.records[-1].success:
                break

        span.set_attribute("episode.steps", len(log.records))
        span.set_attribute("episode.diverged", log.diverged)

    if isinstance(ctrl, MaMppiController):
        log.memory_kinds = ctrl.memory.kind_counts()
        if persist_path is not None:
            save_memory(ctrl.memory, persist_path)
    metrics.record_episode(log.diverged)
    logger.info(
        f"Episode {env.name}/{ctrl.variant} seed {seed}: {len(log.records)} steps, "
        f"cost {log.cumulative_cost:.3f}, diverged={log.diverged}"
    )
    return log
