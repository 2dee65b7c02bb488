"""
Memory-augmented MPPI controller, presets and closed-loop episodes.
"""
from .config import PRESET_NAMES, PRESETS, MaMppiConfig, apply_preset, default_config
from .episode import EpisodeLog, StepRecord, run_episode
from .ma_mppi import Controller, MaMppiController, StepDiagnostics, build_controller

__all__ = [
    "PRESETS",
    "PRESET_NAMES",
    "Controller",
    "EpisodeLog",
    "MaMppiConfig",
    "MaMppiController",
    "StepDiagnostics",
    "StepRecord",
    "apply_preset",
    "build_controller",
    "default_config",
    "run_episode",
]
