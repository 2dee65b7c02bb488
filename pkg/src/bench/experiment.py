"""
Experiment orchestration: seeded trials, result files and summaries.
"""
import csv
import io
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import yaml
from opentelemetry import trace

from ..controllers.episode import EpisodeLog, run_episode
from ..controllers.ma_mppi import build_controller
from ..core.errors import ConfigurationError
from ..envs.scenarios import Scenario
from ..monitoring.logging import experiment_id_ctx, trial_id_ctx, with_logging
from ..monitoring.metrics import metrics
from ..monitoring.tracing import with_tracing
from .config import ExperimentConfig, load_experiment
from .metrics import TIMING_FIELDS, TrialResult, episode_traps, escape_rate, trap_frequency, trial_result
from .stats import RunningStats

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

SUMMARY_FIELDS = (
    "cumulative_reward",
    "cumulative_cost",
    "trap_events",
    "sample_efficiency",
    "value_consistency",
    "smoothness",
    "memory_size",
    "steps",
)
LOG_NAME = re.compile(r"trial_(\d+)(?:_ep(\d+))?\.jsonl$")
TRAP_START_COUNT = 50


@dataclass(frozen=True)
class ExperimentResult:
    """Files and results of one experiment run."""
    output_dir: Path
    trials: List[TrialResult]
    summary: List[Dict[str, str]]

    @property
    def summary_path(self) -> Path:
        return self.output_dir / "summary.csv"


def episode_seed(trial_seed: int, episode: int) -> int:
    """Seed of episode ``episode`` within a trial; the first episode uses the trial seed."""
    if episode == 0:
        return trial_seed
    return int(np.random.SeedSequence([trial_seed, episode]).generate_state(1)[0])


def log_name(trial: int, episode: int, episodes: int) -> str:
    if episodes == 1:
        return f"trial_{trial:03d}.jsonl"
    return f"trial_{trial:03d}_ep{episode:02d}.jsonl"


def run_trial(config: ExperimentConfig, trial: int, output_dir: Union[str, Path]) -> TrialResult:
    """Run every episode of one trial and write its logs and memory."""
    out = Path(output_dir)
    config_hash = config.config_hash()
    experiment_id_ctx.set(config_hash)
    trial_id_ctx.set(trial)
    seed = config.seed_base + trial

    env = config.build_environment()
    starts = env.trap_states()
    if config.start == "trap" and starts.shape[0] == 0:
        raise ConfigurationError(f"Environment {env.name} declares no trap starts", fields=["start"])
    initial_state = starts[trial % starts.shape[0]] if config.start == "trap" else None

    ctrl = build_controller(env, config.preset, config=config.controller_config(env), seed=seed)
    logs: List[EpisodeLog] = []
    with tracer.start_as_current_span("trial") as span:
        span.set_attribute("trial.index", trial)
        span.set_attribute("trial.seed", seed)
        try:
            for episode in range(config.episodes_per_trial):
                last = episode == config.episodes_per_trial - 1
                persist = out / "memory" / f"trial_{trial:03d}.json" if last else None
                log = run_episode(
                    env,
                    ctrl,
                    config.steps,
                    seed=episode_seed(seed, episode),
                    initial_state=initial_state,
                    process_noise=config.process_noise,
                    persist_path=persist,
                    stop_on_success=config.stop_on_success,
                )
                log.variant = config.preset
                log.config_hash = config_hash
                log.save(out / "logs" / log_name(trial, episode, config.episodes_per_trial))
                logs.append(log)
        except Exception as e:
            logger.error(f"Trial {trial} failed: {e}")
            metrics.record_trial(False)
            raise
    metrics.record_trial(True)
    return trial_result(trial, seed, logs, config.trap, scale=env.characteristic_scale)


def _run_trial_task(args: Tuple[ExperimentConfig, int, str]) -> TrialResult:
    return run_trial(*args)


def _format(value: float) -> str:
    return format(value, ".12g")


def summarize(config: ExperimentConfig, results: Sequence[TrialResult]) -> List[Dict[str, str]]:
    """Summary rows: mean ± std per metric, then rates in percent."""
    provenance = {
        "experiment": config.name,
        "preset": config.preset,
        "environment": config.environment.kind,
        "config_hash": config.config_hash(),
    }
    rows: List[Dict[str, str]] = []

    def add(metric: str, mean: float, std: Optional[float], n: int) -> None:
        rows.append({
            "metric": metric,
            "mean": _format(mean),
            "std": "" if std is None else _format(std),
            "n": str(n),
            **provenance,
        })

    ordered = sorted(results, key=lambda r: r.trial)
    for name in SUMMARY_FIELDS:
        values = [getattr(r, name) for r in ordered]
        finite = [float(v) for v in values if v is not None and np.isfinite(v)]
        running = RunningStats().extend(finite)
        add(name, running.mean, running.std, running.count)

    kinds = sorted({kind for r in ordered for kind in r.memory_kinds})
    for kind in kinds:
        running = RunningStats().extend(r.memory_kinds.get(kind, 0) for r in ordered)
        add(f"memory_kind_{kind}", running.mean, running.std, running.count)

    episodes = sum(r.episodes for r in ordered)
    trapped = [True] * sum(r.trapped_episodes for r in ordered)
    trapped += [False] * (episodes - len(trapped))
    add("trap_frequency", trap_frequency(trapped), None, episodes)
    if config.start == "trap":
        judged = [r.escaped for r in ordered if r.escaped is not None]
        if judged:
            add("escape_rate", escape_rate(judged), None, len(judged))
        else:
            logger.warning(f"Experiment {config.name}: no trial was trapped, escape rate omitted")
    add("success_rate", 100.0 * sum(r.success for r in ordered) / len(ordered), None, len(ordered))
    add("collision_rate", 100.0 * sum(r.collision for r in ordered) / len(ordered), None, len(ordered))
    add("divergence_rate", 100.0 * sum(r.diverged for r in ordered) / len(ordered), None, len(ordered))
    return rows


def csv_text(rows: Sequence[Dict[str, object]]) -> str:
    """Rows as CSV with a header taken from the first row."""
    if not rows:
        return ""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def trial_rows(results: Sequence[TrialResult]) -> List[Dict[str, object]]:
    """Per-trial values for external statistics, without timing fields."""
    rows = []
    for r in sorted(results, key=lambda r: r.trial):
        row = r.model_dump(exclude=set(TIMING_FIELDS) | {"memory_kinds"})
        row["value_consistency"] = "" if r.value_consistency is None else r.value_consistency
        rows.append(row)
    return rows


def write_results(config: ExperimentConfig, results: Sequence[TrialResult], out: Path) -> List[Dict[str, str]]:
    summary = summarize(config, results)
    (out / "summary.csv").write_text(csv_text(summary))
    (out / "trials.csv").write_text(csv_text(trial_rows(results)))
    timing = [
        {"trial": r.trial, "compute_time": _format(r.compute_time), "steps": r.steps}
        for r in sorted(results, key=lambda r: r.trial)
    ]
    (out / "timing.csv").write_text(csv_text(timing))
    return summary


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Run every trial of ``config`` and write logs, memories and summaries.

    Trial i uses seed ``seed_base + i``. With ``workers > 1`` trials run in
    separate processes; the results are reduced in trial order, so the
    summary does not depend on the worker count.
    """
    out = Path(config.output_dir)
    (out / "logs").mkdir(parents=True, exist_ok=True)
    (out / "config.yaml").write_text(config.to_yaml())
    experiment_id_ctx.set(config.config_hash())
    logger.info(
        f"Experiment {config.name}: {config.trials} trials of {config.preset} "
        f"on {config.environment.kind}, output {out}"
    )

    if config.start == "trap":
        starts = config.build_environment().trap_states().shape[0]
        if 0 < starts < config.trials:
            logger.warning(f"Experiment {config.name}: {starts} trap starts shared by {config.trials} trials")

    tasks = [(config, i, str(out)) for i in range(config.trials)]
    with tracer.start_as_current_span("experiment") as span:
        span.set_attribute("experiment.name", config.name)
        span.set_attribute("experiment.trials", config.trials)
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_run_trial_task, tasks))
        else:
            results = [_run_trial_task(task) for task in tasks]

    summary = write_results(config, results, out)
    logger.info(f"Experiment {config.name} finished, summary at {out / 'summary.csv'}")
    return ExperimentResult(output_dir=out, trials=results, summary=summary)


def load_logs(log_dir: Union[str, Path]) -> Dict[int, List[EpisodeLog]]:
    """Episode logs grouped by trial, episodes in order."""
    grouped: Dict[int, List[Tuple[int, EpisodeLog]]] = {}
    for path in sorted(Path(log_dir).glob("trial_*.jsonl")):
        match = LOG_NAME.search(path.name)
        if match is None:
            continue
        trial = int(match.group(1))
        episode = int(match.group(2) or 0)
        grouped.setdefault(trial, []).append((episode, EpisodeLog.load(path)))
    return {trial: [log for _, log in sorted(items, key=lambda item: item[0])] for trial, items in grouped.items()}


@with_logging
def recompute(result_dir: Union[str, Path]) -> Tuple[ExperimentConfig, List[TrialResult], List[Dict[str, str]]]:
    """Recompute trial results and the summary from a finished experiment directory."""
    out = Path(result_dir)
    config = load_experiment(out / "config.yaml")
    scale = config.build_environment().characteristic_scale
    grouped = load_logs(out / "logs")
    if not grouped:
        raise ConfigurationError(f"No episode logs under {out / 'logs'}", fields=["logs"])
    results = [
        trial_result(trial, config.seed_base + trial, logs, config.trap, scale=scale)
        for trial, logs in sorted(grouped.items())
    ]
    return config, results, summarize(config, results)


def read_trials(result_dir: Union[str, Path]) -> Dict[str, List[float]]:
    """Numeric per-trial columns of ``trials.csv``."""
    with open(Path(result_dir) / "trials.csv", "r", newline="") as f:
        rows = list(csv.DictReader(f))
    columns: Dict[str, List[float]] = {}
    for row in rows:
        for key, value in row.items():
            if key in ("trial", "seed"):
                continue
            if value in ("True", "False"):
                number = 1.0 if value == "True" else 0.0
            else:
                try:
                    number = float(value)
                except ValueError:
                    continue
            columns.setdefault(key, []).append(number)
    return columns


@with_tracing("gen_traps")
def generate_trap_starts(
    config: ExperimentConfig,
    output: Optional[Union[str, Path]] = None,
    count: int = TRAP_START_COUNT,
) -> Path:
    """Run standard MPPI from normal starts and persist the trap entry states.

    Trials run in seed order, at most ``config.trials`` of them, until
    ``count`` distinct first trap entries are collected. The scenario of the
    configured environment is written back with those planar positions as
    its ``trap_starts``, in the order they were found.
    """
    if count < 1:
        raise ConfigurationError(f"trap start count must be positive, got {count}", fields=["count"])
    env = config.build_environment()
    scenario: Optional[Scenario] = getattr(env, "scenario", None)
    if scenario is None:
        raise ConfigurationError(f"Environment {env.name} has no scenario to store trap starts in", fields=["environment"])

    entries: List[Tuple[float, float]] = []
    for trial in range(config.trials):
        if len(entries) >= count:
            break
        seed = config.seed_base + trial
        ctrl = build_controller(env, "mppi", config=config.controller_config(env), seed=seed)
        log = run_episode(env, ctrl, config.steps, seed=seed, process_noise=config.process_noise)
        events = episode_traps(log, config.trap, scale=env.characteristic_scale)
        if events:
            x, y = log.records[events[0].entry].state[0:2]
            entry = (round(x, 6), round(y, 6))
            if entry not in entries:
                entries.append(entry)
            logger.info(f"Trial {trial}: trap entered at step {events[0].entry}")

    if len(entries) < count:
        logger.warning(f"Only {len(entries)} of {count} trap starts found in {config.trials} trials")
    path = Path(output) if output is not None else Path(config.output_dir) / f"{scenario.name}_traps.yaml"
    path.parent.mkdir(parents=True, exist_ok=True)
    document = scenario.model_copy(update={"trap_starts": entries}).model_dump(mode="json")
    path.write_text(yaml.safe_dump(document, sort_keys=True))
    logger.info(f"Wrote {len(entries)} trap starts to {path}")
    return path
