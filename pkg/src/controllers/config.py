"""
MA-MPPI configuration and ablation presets.
"""
from typing import Callable, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..core.errors import ConfigurationError
from ..detection.thresholds import DetectionThresholds
from ..envs.base import Environment
from ..memory.params import MemoryParams
from ..mppi.config import MppiConfig
from ..potential.params import PotentialParams

PRESET_NAMES = ("mppi", "ma-mppi", "no-memory", "no-detection", "no-adaptive-weights")


class MaMppiConfig(BaseModel):
    """Full controller configuration.

    Attributes:
        mppi: Sampling and weighting parameters
        detection: Feature detector thresholds and cadences
        memory: Memory dynamics
        potential: Value shaping and sampling adaptation
        memory_enabled: False runs plain MPPI and skips detection, memory and potentials
        memory_weight: w_mem, weight of the memory term injected into rollout costs
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    mppi: MppiConfig = Field(default_factory=MppiConfig)
    detection: DetectionThresholds = Field(default_factory=DetectionThresholds)
    memory: MemoryParams = Field(default_factory=MemoryParams)
    potential: PotentialParams = Field(default_factory=PotentialParams)
    memory_enabled: bool = True
    memory_weight: float = Field(default=1.0, ge=0.0)


def default_config(env: Environment, memory: Optional[MemoryParams] = None) -> MaMppiConfig:
    """MA-MPPI configuration with the environment's MPPI and detection defaults."""
    detection = env.default_detection().model_copy(update={"characteristic_scale": env.characteristic_scale})
    return MaMppiConfig(
        mppi=env.default_mppi(),
        detection=detection,
        memory=memory or MemoryParams(),
    )


def _disable_memory(config: MaMppiConfig) -> MaMppiConfig:
    return config.model_copy(update={"memory_enabled": False})


def _full(config: MaMppiConfig) -> MaMppiConfig:
    return config.model_copy(update={"memory_enabled": True})


def _no_detection(config: MaMppiConfig) -> MaMppiConfig:
    # only stagnation survives, checked once per window
    detection = config.detection.model_copy(update={
        "gradient_checks": False,
        "curvature_checks": False,
        "stagnation_cadence": config.detection.window,
    })
    return config.model_copy(update={"memory_enabled": True, "detection": detection})


def _no_adaptive_weights(config: MaMppiConfig) -> MaMppiConfig:
    potential = config.potential.model_copy(update={
        "alpha_variant": "constant",
        "adapt_temperature": False,
        "adapt_covariance": False,
    })
    return config.model_copy(update={"memory_enabled": True, "potential": potential})


PRESETS: Dict[str, Callable[[MaMppiConfig], MaMppiConfig]] = {
    "mppi": _disable_memory,
    "ma-mppi": _full,
    "no-memory": _disable_memory,
    "no-detection": _no_detection,
    "no-adaptive-weights": _no_adaptive_weights,
}


def apply_preset(config: MaMppiConfig, preset: str) -> MaMppiConfig:
    """Transform ``config`` into the named variant."""
    try:
        transform = PRESETS[preset]
    except KeyError:
        raise ConfigurationError(f"Unknown controller preset '{preset}'", fields=["preset"]) from None
    return transform(config)
