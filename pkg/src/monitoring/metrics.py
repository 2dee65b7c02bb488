"""
Metrics implementation for mamppi.
Provides Prometheus metrics for controller steps, memory dynamics and runs.
"""
import logging
from typing import Dict, Mapping

from prometheus_client import Counter, Gauge, Histogram, Info, start_http_server

logger = logging.getLogger(__name__)

STEP_BUCKETS = (0.0005, 0.001, 0.0025, 0.005, 0.01, 0.025, 0.05, 0.1, 0.25, 0.5, 1.0)


class MetricsCollector:
    """Collector for controller and harness metrics."""

    def __init__(self):
        # Controller metrics
        self.controller_steps_total = Counter(
            "mamppi_controller_steps_total",
            "Total number of controller steps",
            ["variant"],
        )

        self.step_phase_duration = Histogram(
            "mamppi_step_phase_duration_seconds",
            "Controller step phase duration in seconds",
            ["phase"],
            buckets=STEP_BUCKETS,
        )

        self.infeasible_rollouts_total = Counter(
            "mamppi_infeasible_rollouts_total",
            "Rollouts that received the infinite cost sentinel",
        )

        # Memory metrics
        self.memory_events_total = Counter(
            "mamppi_memory_events_total",
            "Memory store events",
            ["event"],
        )

        self.memory_size = Gauge(
            "mamppi_memory_features",
            "Number of stored memory features",
        )

        # Harness metrics
        self.episodes_total = Counter(
            "mamppi_episodes_total",
            "Total number of episodes",
            ["status"],
        )

        self.trials_total = Counter(
            "mamppi_trials_total",
            "Total number of experiment trials",
            ["status"],
        )

        self.system_info = Info(
            "mamppi_system_info",
            "System information",
        )

    def record_step(self, variant: str, phase_times: Mapping[str, float]) -> None:
        """Record one controller step and its per-phase wall times."""
        self.controller_steps_total.labels(variant=variant).inc()
        for phase, duration in phase_times.items():
            self.step_phase_duration.labels(phase=phase).observe(duration)

    def record_infeasible(self, count: int) -> None:
        """Record rollouts flagged infeasible."""
        if count:
            self.infeasible_rollouts_total.inc(count)

    def record_memory_event(self, event: str, count: int = 1) -> None:
        """Record a memory event (added, merged, dropped, evicted, pruned)."""
        if count:
            self.memory_events_total.labels(event=event).inc(count)

    def update_memory_size(self, size: int) -> None:
        """Update the memory size gauge."""
        self.memory_size.set(size)

    def record_episode(self, diverged: bool) -> None:
        """Record a finished episode."""
        self.episodes_total.labels(status="diverged" if diverged else "completed").inc()

    def record_trial(self, success: bool) -> None:
        """Record a finished trial."""
        self.trials_total.labels(status="success" if success else "error").inc()

    def set_system_info(self, info: Dict[str, str]) -> None:
        """Set system information."""
        self.system_info.info(info)


def start_metrics_server(port: int) -> None:
    """Expose the default registry over HTTP."""
    start_http_server(port)
    logger.info(f"Metrics exporter listening on port {port}")


# Global metrics collector instance
metrics = MetricsCollector()
