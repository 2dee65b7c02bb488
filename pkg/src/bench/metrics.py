"""
Benchmark metrics computed from episode logs.

Every function here is a pure function of its inputs, so summaries can be
recomputed from persisted logs.
"""
import math
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict
from scipy import stats

from ..controllers.episode import EpisodeLog
from ..core.errors import ContractViolation
from .config import TrapCriteria
from .traps import TrapEvent, detect_trap_episodes

EFFICIENCY_FRACTION = 0.8
STABILITY_WINDOW = 10
# Trial fields that depend on wall time and stay out of deterministic summaries
TIMING_FIELDS = ("compute_time",)


def escape_rate(escaped: Sequence[Optional[bool]]) -> float:
    """P_escape = escapes / trapped trials · 100; trials never trapped (None) are skipped."""
    judged = [bool(e) for e in escaped if e is not None]
    if not judged:
        raise ContractViolation("escape rate needs at least one trapped trial")
    return 100.0 * sum(judged) / len(judged)


def trap_frequency(trapped: Sequence[bool]) -> float:
    """F_trap = episodes with a trap / episodes · 100."""
    if len(trapped) == 0:
        raise ContractViolation("trap frequency needs at least one episode")
    return 100.0 * sum(bool(t) for t in trapped) / len(trapped)


def asymptote(curve: ArrayLike, window: int = STABILITY_WINDOW) -> float:
    """Mean of the trailing stability window."""
    data = np.asarray(curve, dtype=np.float64)
    if data.size == 0:
        raise ContractViolation("asymptote of an empty curve")
    return float(np.mean(data[-window:]))


def sample_efficiency(
    curve: ArrayLike,
    asymptote_value: Optional[float] = None,
    fraction: float = EFFICIENCY_FRACTION,
) -> Union[int, float]:
    """N_80%: first index with R(n) ≥ 0.8 · R_asymp, +inf if never reached."""
    data = np.asarray(curve, dtype=np.float64)
    if data.size == 0:
        raise ContractViolation("sample efficiency of an empty curve")
    target = fraction * (asymptote(data) if asymptote_value is None else asymptote_value)
    hits = np.flatnonzero(data >= target)
    return int(hits[0]) if hits.size else math.inf


def value_consistency(predicted: ArrayLike, realized: ArrayLike) -> float:
    """Pearson correlation ρ_V between predicted and realized values."""
    p = np.asarray(predicted, dtype=np.float64)
    r = np.asarray(realized, dtype=np.float64)
    if p.shape != r.shape or p.ndim != 1:
        raise ContractViolation(f"paired series must be 1-D and equal length, got {p.shape} and {r.shape}")
    if p.size < 2:
        raise ContractViolation("value consistency needs at least two pairs")
    if np.ptp(p) == 0.0 or np.ptp(r) == 0.0:
        raise ContractViolation("value consistency is undefined for a constant series")
    return float(stats.pearsonr(p, r)[0])


def realized_values(costs: ArrayLike, horizon: int) -> NDArray[np.float64]:
    """R_actual at step t: the cost realized over steps t .. t+H−1.

    Only steps with a full horizon ahead are returned.
    """
    c = np.asarray(costs, dtype=np.float64)
    if horizon < 1:
        raise ContractViolation(f"horizon must be positive, got {horizon}")
    if c.size < horizon:
        return np.empty(0)
    window_sums = np.convolve(c, np.ones(horizon), mode="valid")
    return window_sums


def control_smoothness(controls: ArrayLike) -> float:
    """Mean squared control increment ‖u_t − u_{t−1}‖²; 0 for fewer than two controls."""
    u = np.asarray(controls, dtype=np.float64)
    if u.shape[0] < 2:
        return 0.0
    return float(np.mean(np.sum(np.diff(u, axis=0) ** 2, axis=1)))


def episode_traps(log: EpisodeLog, criteria: TrapCriteria, scale: float = 1.0) -> List[TrapEvent]:
    if len(log) == 0:
        return []
    return detect_trap_episodes(
        log.states,
        np.array([r.value for r in log.records]),
        value_threshold_frac=criteria.value_threshold_frac,
        neighborhood_radius=criteria.neighborhood_radius,
        threshold_steps=criteria.threshold_steps,
        improvement_tolerance=criteria.improvement_tolerance,
        scale=scale,
        window=criteria.window,
        radius_factor=criteria.radius_factor,
        success=[r.success for r in log.records],
        optimal_value=log.goal_value,
    )


class TrialResult(BaseModel):
    """Metrics of one trial, derived from its episode logs only."""
    model_config = ConfigDict(extra="forbid")

    trial: int
    seed: int
    episodes: int
    steps: int
    cumulative_reward: float
    cumulative_cost: float
    trap_events: int
    trapped_episodes: int
    escaped: Optional[bool] = None
    sample_efficiency: float
    value_consistency: Optional[float] = None
    smoothness: float
    success: bool
    collision: bool
    diverged: bool
    memory_size: int
    memory_kinds: Dict[int, int]
    compute_time: float


def trial_result(
    trial: int,
    seed: int,
    logs: List[EpisodeLog],
    criteria: TrapCriteria,
    scale: float = 1.0,
) -> TrialResult:
    """Aggregate the episodes of one trial.

    Escape is judged on the first episode: it escaped when every trap event
    ended with an exit followed by an improvement of the best value. A first
    episode without trap events leaves ``escaped`` unset. Sample efficiency is
    measured on the reward curve of all episodes in order, shifted so its worst
    step is zero.
    """
    if not logs:
        raise ContractViolation("a trial needs at least one episode log")
    traps = [episode_traps(log, criteria, scale) for log in logs]
    rewards = np.concatenate([log.rewards for log in logs]) if any(len(log) for log in logs) else np.zeros(1)
    curve = rewards - np.min(rewards)

    consistency = []
    for log in logs:
        realized = realized_values(log.costs, log.horizon)
        if realized.size >= 2:
            try:
                consistency.append(value_consistency(log.predicted_values[:realized.size], realized))
            except ContractViolation:
                pass

    steps = sum(len(log) for log in logs)
    smoothness = [control_smoothness(log.controls) for log in logs if len(log) >= 2]
    last = logs[-1]
    return TrialResult(
        trial=trial,
        seed=seed,
        episodes=len(logs),
        steps=steps,
        cumulative_reward=math.fsum(log.cumulative_reward for log in logs),
        cumulative_cost=math.fsum(log.cumulative_cost for log in logs),
        trap_events=sum(len(events) for events in traps),
        trapped_episodes=sum(1 for events in traps if events),
        escaped=all(event.escaped for event in traps[0]) if traps[0] else None,
        sample_efficiency=float(sample_efficiency(curve)),
        value_consistency=float(np.mean(consistency)) if consistency else None,
        smoothness=float(np.mean(smoothness)) if smoothness else 0.0,
        success=any(log.succeeded for log in logs),
        collision=any(log.collided for log in logs),
        diverged=any(log.diverged for log in logs),
        memory_size=last.records[-1].memory_size if len(last) else 0,
        memory_kinds=dict(last.memory_kinds),
        compute_time=math.fsum(log.wall_time for log in logs) / max(steps, 1),
    )
