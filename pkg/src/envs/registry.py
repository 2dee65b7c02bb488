"""
Environment configuration documents and construction.
"""
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from .base import Environment
from .double_well import DoubleWellEnv
from .navigation import PointMassNavEnv
from .pendulum import PendulumEnv
from .quadrotor import QuadrotorEnv
from .scenarios import Scenario, load_scenario


class PendulumConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["pendulum"] = "pendulum"
    max_torque: float = Field(default=2.0, gt=0.0)
    damping: float = Field(default=0.0, ge=0.0)
    dt: float = Field(default=0.05, gt=0.0)


class NavigationConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["navigation"] = "navigation"
    scenario: Union[str, Scenario] = "u-trap"
    dt: float = Field(default=0.1, gt=0.0)
    max_speed: float = Field(default=2.0, gt=0.0)
    max_accel: float = Field(default=2.0, gt=0.0)
    obstacle_weight: float = Field(default=100.0, ge=0.0)


class QuadrotorConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["quadrotor"] = "quadrotor"
    scenario: Union[str, Scenario] = "single-cylinder"
    dt: float = Field(default=0.02, gt=0.0)
    drag: float = Field(default=0.1, ge=0.0)


class DoubleWellConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["double-well"] = "double-well"
    tilt: float = 0.0
    dt: float = Field(default=0.05, gt=0.0)


EnvironmentConfig = Annotated[
    Union[PendulumConfig, NavigationConfig, QuadrotorConfig, DoubleWellConfig],
    Field(discriminator="kind"),
]


def _scenario(source: Union[str, Scenario]) -> Scenario:
    if isinstance(source, Scenario):
        return source
    return load_scenario(source)


def build_environment(config: Optional[EnvironmentConfig] = None) -> Environment:
    """Instantiate the environment described by ``config`` (pendulum by default)."""
    if config is None or isinstance(config, PendulumConfig):
        config = config or PendulumConfig()
        return PendulumEnv(max_torque=config.max_torque, damping=config.damping, dt=config.dt)
    if isinstance(config, NavigationConfig):
        return PointMassNavEnv(
            scenario=_scenario(config.scenario),
            dt=config.dt,
            max_speed=config.max_speed,
            max_accel=config.max_accel,
            obstacle_weight=config.obstacle_weight,
        )
    if isinstance(config, QuadrotorConfig):
        return QuadrotorEnv(scenario=_scenario(config.scenario), dt=config.dt, drag=config.drag)
    return DoubleWellEnv(tilt=config.tilt, dt=config.dt)
