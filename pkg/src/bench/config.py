"""
Experiment configuration documents.
"""
import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config import load_yaml_model, parse_model
from ..core.errors import ConfigurationError
from ..controllers.config import PRESET_NAMES, MaMppiConfig, default_config
from ..envs.base import Environment
from ..envs.registry import EnvironmentConfig, PendulumConfig, build_environment
from ..memory.params import MEMORY_PRESETS, memory_preset


class TrapCriteria(BaseModel):
    """Parameters of trap-interval detection in episode logs.

    Attributes:
        value_threshold_frac: Normalized return (0 worst, 1 optimum) below which a state may be a trap
        threshold_steps: Minimum length of a trap interval
        radius_factor: Neighborhood radius as a multiple of the window spread at entry
        window: Number of states whose spread sets the default radius
        improvement_tolerance: Relative decrease of the best value counted as improvement
        neighborhood_radius: Fixed radius overriding the spread rule
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    value_threshold_frac: float = Field(default=0.5, gt=0.0, le=1.0)
    threshold_steps: int = Field(default=50, ge=1)
    radius_factor: float = Field(default=3.0, gt=0.0)
    window: int = Field(default=20, ge=2)
    improvement_tolerance: float = Field(default=1e-6, ge=0.0)
    neighborhood_radius: Optional[float] = Field(default=None, gt=0.0)


class ExperimentConfig(BaseModel):
    """One experiment: an environment, a controller variant and a trial protocol.

    Attributes:
        name: Experiment name
        environment: Environment document, discriminated by ``kind``
        preset: Controller variant
        controller: Overrides merged into the environment's default MA-MPPI configuration
        memory_preset: Named memory parameter set applied before the overrides
        trials: Number of seeded trials
        episodes_per_trial: Episodes sharing one controller (and its memory) per trial
        steps: Control steps per episode
        seed_base: Trial i uses seed seed_base + i
        start: ``normal`` draws the start from the environment, ``trap`` uses its trap starts
        process_noise: Std of additive state noise during execution
        stop_on_success: End episodes at the first successful state
        trap: Trap detection criteria
        output_dir: Directory receiving logs, memories and summaries
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = "experiment"
    environment: EnvironmentConfig = Field(default_factory=PendulumConfig)
    preset: str = "ma-mppi"
    controller: Dict[str, Any] = Field(default_factory=dict)
    memory_preset: Optional[str] = None
    trials: int = Field(default=10, ge=1)
    episodes_per_trial: int = Field(default=1, ge=1)
    steps: int = Field(default=400, ge=1)
    seed_base: int = Field(default=0, ge=0)
    start: Literal["normal", "trap"] = "normal"
    process_noise: float = Field(default=0.0, ge=0.0)
    stop_on_success: bool = False
    trap: TrapCriteria = Field(default_factory=TrapCriteria)
    output_dir: str = "results"

    @field_validator("preset")
    @classmethod
    def validate_preset(cls, value: str) -> str:
        if value not in PRESET_NAMES:
            raise ValueError(f"preset must be one of {', '.join(PRESET_NAMES)}")
        return value

    @field_validator("memory_preset")
    @classmethod
    def validate_memory_preset(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in MEMORY_PRESETS:
            raise ValueError(f"memory_preset must be one of {', '.join(MEMORY_PRESETS)}")
        return value

    @model_validator(mode="after")
    def validate_controller_overrides(self) -> "ExperimentConfig":
        # Unknown or invalid controller keys fail here rather than inside a worker
        try:
            self.controller_config(self.build_environment())
        except ConfigurationError as e:
            raise ConfigurationError(
                "Invalid controller overrides",
                fields=[f"controller.{field}" for field in e.fields],
            ) from e
        return self

    def build_environment(self) -> Environment:
        return build_environment(self.environment)

    def controller_config(self, env: Environment) -> MaMppiConfig:
        """Environment defaults, then the memory preset, then the overrides."""
        memory = memory_preset(self.memory_preset) if self.memory_preset else None
        base = default_config(env, memory=memory).model_dump()
        return parse_model(MaMppiConfig, _deep_merge(base, self.controller), source="controller overrides")

    def config_hash(self) -> str:
        """Digest of every field that influences results."""
        payload = self.model_dump(mode="json", exclude={"output_dir"})
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.model_dump(mode="json"), sort_keys=True)


def _deep_merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_experiment(path: Union[str, Path]) -> ExperimentConfig:
    """Read and validate an experiment YAML file."""
    return load_yaml_model(ExperimentConfig, path)


def parse_experiment(data: Dict[str, Any]) -> ExperimentConfig:
    return parse_model(ExperimentConfig, data, source="experiment configuration")
