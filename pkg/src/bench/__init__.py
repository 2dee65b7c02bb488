"""
Benchmark harness: experiment configuration, trap detection, metrics and orchestration.
"""
from .config import ExperimentConfig, TrapCriteria, load_experiment, parse_experiment
from .experiment import (
    ExperimentResult,
    generate_trap_starts,
    read_trials,
    recompute,
    run_experiment,
    run_trial,
    summarize,
)
from .metrics import (
    TrialResult,
    asymptote,
    control_smoothness,
    escape_rate,
    realized_values,
    sample_efficiency,
    trap_frequency,
    trial_result,
    value_consistency,
)
from .stats import Comparison, RunningStats, compare_samples, two_pass_stats
from .traps import TrapEvent, detect_trap_episodes, normalized_return

__all__ = [
    "Comparison",
    "ExperimentConfig",
    "ExperimentResult",
    "RunningStats",
    "TrapCriteria",
    "TrapEvent",
    "TrialResult",
    "asymptote",
    "compare_samples",
    "control_smoothness",
    "detect_trap_episodes",
    "escape_rate",
    "generate_trap_starts",
    "load_experiment",
    "normalized_return",
    "parse_experiment",
    "read_trials",
    "realized_values",
    "recompute",
    "run_experiment",
    "run_trial",
    "sample_efficiency",
    "summarize",
    "trap_frequency",
    "trial_result",
    "two_pass_stats",
    "value_consistency",
]
