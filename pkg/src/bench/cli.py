"""
Command line entry point of the benchmark harness.

    mamppi-bench run config/experiments/pendulum_smoke.yaml --trials 3
    mamppi-bench metrics results/pendulum_smoke
    mamppi-bench compare results/nav_u_trap_mppi results/nav_u_trap_ma_mppi
    mamppi-bench gen-traps config/experiments/nav_u_trap_mppi.yaml
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..config import Settings, get_settings
from ..controllers.config import PRESET_NAMES
from ..core.errors import ConfigurationError, MamppiError
from ..monitoring.logging import configure_logging
from ..monitoring.metrics import metrics, start_metrics_server
from ..monitoring.tracing import configure_tracing
from .config import ExperimentConfig, load_experiment, parse_experiment
from .experiment import TRAP_START_COUNT, csv_text, generate_trap_starts, read_trials, recompute, run_experiment
from .stats import compare_samples

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mamppi-bench", description="MPPI and MA-MPPI benchmark harness")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run an experiment configuration")
    run.add_argument("config", type=Path, help="experiment YAML file")
    _add_overrides(run)
    run.add_argument("--workers", type=int, default=None, help="parallel trial workers (default: MAMPPI_WORKERS)")

    recompute_cmd = commands.add_parser("metrics", help="recompute the summary of a finished experiment")
    recompute_cmd.add_argument("result_dir", type=Path, help="experiment output directory")
    recompute_cmd.add_argument("--write", action="store_true", help="overwrite summary.csv in the result directory")

    compare = commands.add_parser("compare", help="rank comparison of two experiments")
    compare.add_argument("dir_a", type=Path)
    compare.add_argument("dir_b", type=Path)
    compare.add_argument("--metric", action="append", default=None, help="metric to compare (repeatable)")
    compare.add_argument("--out", type=Path, default=None, help="write the comparison CSV here")

    traps = commands.add_parser("gen-traps", help="record trap entry states with standard MPPI")
    traps.add_argument("config", type=Path, help="experiment YAML file")
    _add_overrides(traps)
    traps.add_argument("--scenario-out", type=Path, default=None, help="scenario YAML to write")
    traps.add_argument("--count", type=int, default=TRAP_START_COUNT, help="trap starts to collect")
    return parser


def _add_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed-base", type=int, default=None)
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--out", type=str, default=None, help="output directory")
    parser.add_argument("--preset", choices=PRESET_NAMES, default=None)


def apply_overrides(config: ExperimentConfig, args: argparse.Namespace, settings: Settings) -> ExperimentConfig:
    """Apply command line flags and re-validate the result."""
    updates: Dict[str, Any] = {}
    if args.seed_base is not None:
        updates["seed_base"] = args.seed_base
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.preset is not None:
        updates["preset"] = args.preset
    if args.out is not None:
        updates["output_dir"] = args.out
    elif "output_dir" not in config.model_fields_set:
        updates["output_dir"] = str(Path(settings.output_dir) / config.name)
    if not updates:
        return config
    return parse_experiment({**config.model_dump(mode="json"), **updates})


def cmd_run(args: argparse.Namespace, settings: Settings) -> int:
    config = apply_overrides(load_experiment(args.config), args, settings)
    workers = args.workers if args.workers is not None else settings.workers
    result = run_experiment(config, workers=max(1, workers))
    sys.stdout.write(csv_text(result.summary))
    return EXIT_OK


def cmd_metrics(args: argparse.Namespace, settings: Settings) -> int:
    _, _, summary = recompute(args.result_dir)
    text = csv_text(summary)
    if args.write:
        (args.result_dir / "summary.csv").write_text(text)
        logger.info(f"Rewrote {args.result_dir / 'summary.csv'}")
    sys.stdout.write(text)
    return EXIT_OK


def comparison_rows(dir_a: Path, dir_b: Path, selected: Optional[Sequence[str]] = None) -> List[Dict[str, object]]:
    """Mann-Whitney comparison of every numeric per-trial column shared by both experiments."""
    a = read_trials(dir_a)
    b = read_trials(dir_b)
    names = [name for name in a if name in b] if selected is None else list(selected)
    missing = [name for name in names if name not in a or name not in b]
    if missing:
        raise ConfigurationError("Unknown metrics", fields=missing)

    rows: List[Dict[str, object]] = []
    for name in names:
        try:
            result = compare_samples(name, a[name], b[name])
        except MamppiError as e:
            logger.warning(f"Skipping {name}: {e}")
            continue
        rows.append({
            "metric": name,
            "n_a": result.n_a,
            "n_b": result.n_b,
            "mean_a": format(float(np.mean(_finite(a[name]))), ".12g"),
            "mean_b": format(float(np.mean(_finite(b[name]))), ".12g"),
            "u_statistic": format(result.u_statistic, ".12g"),
            "p_value": format(result.p_value, ".12g"),
            "superiority": format(result.superiority, ".12g"),
        })
    return rows


def _finite(values: Sequence[float]) -> np.ndarray:
    data = np.asarray(values, dtype=np.float64)
    return data[np.isfinite(data)]


def cmd_compare(args: argparse.Namespace, settings: Settings) -> int:
    text = csv_text(comparison_rows(args.dir_a, args.dir_b, args.metric))
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_gen_traps(args: argparse.Namespace, settings: Settings) -> int:
    config = apply_overrides(load_experiment(args.config), args, settings)
    path = generate_trap_starts(config, output=args.scenario_out, count=args.count)
    sys.stdout.write(f"{path}\n")
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "metrics": cmd_metrics,
    "compare": cmd_compare,
    "gen-traps": cmd_gen_traps,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    configure_logging(settings.log_level, settings.log_json)
    configure_tracing(settings.tracing_enabled)
    if settings.metrics_port is not None:
        start_metrics_server(settings.metrics_port)
    metrics.set_system_info({"command": args.command, "workers": str(settings.workers)})

    try:
        return COMMANDS[args.command](args, settings)
    except ConfigurationError as e:
        logger.error(str(e))
        return EXIT_CONFIG
    except MamppiError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
