"""
Obstacle layouts shared by the planar navigation and quadrotor tasks.

Obstacles are discs in the horizontal plane; the quadrotor reads them as
vertical cylinders. A scenario either lists its obstacles explicitly or names
a family whose generator builds them.
"""
import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
import yaml
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..core.errors import ConfigurationError

logger = logging.getLogger(__name__)

WALL_DISC_RADIUS = 0.25
WALL_DISC_SPACING = 0.25


class Disc(BaseModel):
    """Circular obstacle."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    center: Tuple[float, float]
    radius: float = Field(gt=0.0)


class Scenario(BaseModel):
    """Obstacle layout with start, goal and waypoints.

    Attributes:
        name: Scenario name
        family: Generator family, used when ``obstacles`` is empty
        obstacles: Explicit obstacle discs
        start: Planar start position
        goal: Planar goal position
        altitude: Flight altitude for the quadrotor
        waypoints: Intermediate planar waypoints before the goal
        trap_probe: A point inside the trap region, if the layout has one
        trap_starts: Start positions placed inside the trap region
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = "open-field"
    family: Optional[str] = None
    obstacles: List[Disc] = Field(default_factory=list)
    start: Tuple[float, float] = (0.0, 0.0)
    goal: Tuple[float, float] = (10.0, 0.0)
    altitude: float = 1.5
    waypoints: List[Tuple[float, float]] = Field(default_factory=list)
    trap_probe: Optional[Tuple[float, float]] = None
    trap_starts: List[Tuple[float, float]] = Field(default_factory=list)

    @property
    def centers(self) -> NDArray[np.float64]:
        if not self.obstacles:
            return np.zeros((0, 2))
        return np.array([d.center for d in self.obstacles], dtype=np.float64)

    @property
    def radii(self) -> NDArray[np.float64]:
        return np.array([d.radius for d in self.obstacles], dtype=np.float64)


def wall(start: Tuple[float, float], end: Tuple[float, float], radius: float = WALL_DISC_RADIUS) -> List[Disc]:
    """Line segment of overlapping discs from ``start`` to ``end``."""
    a = np.asarray(start, dtype=np.float64)
    b = np.asarray(end, dtype=np.float64)
    count = max(2, int(np.ceil(np.linalg.norm(b - a) / WALL_DISC_SPACING)) + 1)
    return [
        Disc(center=(float(p[0]), float(p[1])), radius=radius)
        for p in np.linspace(a, b, count)
    ]


def u_trap(
    bottom_x: float = 6.0,
    mouth_x: float = 3.0,
    half_width: float = 2.5,
) -> List[Disc]:
    """U-shaped wall open toward −x: bottom at ``bottom_x``, sides at y = ±half_width."""
    bottom = wall((bottom_x, -half_width), (bottom_x, half_width))
    upper = wall((mouth_x, half_width), (bottom_x, half_width))
    lower = wall((mouth_x, -half_width), (bottom_x, -half_width))
    return bottom + upper + lower


def _open_field() -> Scenario:
    return Scenario(name="open-field", family="open-field")


def _single_cylinder() -> Scenario:
    return Scenario(
        name="single-cylinder",
        family="single-cylinder",
        obstacles=[Disc(center=(5.0, 0.0), radius=1.0)],
    )


def _cylinder_corridor() -> Scenario:
    obstacles = [Disc(center=(float(x), y), radius=0.5) for x in (3.0, 5.0, 7.0) for y in (-1.75, 1.75)]
    return Scenario(name="cylinder-corridor", family="cylinder-corridor", obstacles=obstacles)


def _u_trap() -> Scenario:
    return Scenario(
        name="u-trap",
        family="u-trap",
        obstacles=u_trap(),
        trap_probe=(4.5, 0.0),
        # placeholders for quick runs; gen-traps writes the recorded benchmark set
        trap_starts=[(4.0, 0.0), (4.5, 0.5), (4.5, -0.5)],
    )


def _slalom() -> Scenario:
    obstacles = [
        Disc(center=(float(x), 0.8 if i % 2 == 0 else -0.8), radius=0.6)
        for i, x in enumerate((2.5, 4.5, 6.5, 8.5))
    ]
    return Scenario(
        name="slalom",
        family="slalom",
        obstacles=obstacles,
        waypoints=[(3.5, -1.0), (5.5, 1.0), (7.5, -1.0)],
    )


SCENARIO_FAMILIES: Dict[str, Callable[[], Scenario]] = {
    "open-field": _open_field,
    "single-cylinder": _single_cylinder,
    "cylinder-corridor": _cylinder_corridor,
    "u-trap": _u_trap,
    "slalom": _slalom,
}


def scenario_family(name: str) -> Scenario:
    """Built-in scenario by family name."""
    try:
        return SCENARIO_FAMILIES[name]()
    except KeyError:
        raise ConfigurationError(
            f"Unknown scenario family '{name}'",
            fields=["family"],
        ) from None


def resolve_scenario(scenario: Scenario) -> Scenario:
    """Fill in generated obstacles for a scenario that only names its family.

    Trap starts declared by the scenario itself, such as those written by
    ``generate_trap_starts``, take precedence over the family's placeholders.
    """
    if scenario.obstacles or scenario.family is None:
        return scenario
    generated = scenario_family(scenario.family)
    return scenario.model_copy(update={
        "obstacles": generated.obstacles,
        "trap_probe": scenario.trap_probe or generated.trap_probe,
        "trap_starts": scenario.trap_starts or generated.trap_starts,
        "waypoints": scenario.waypoints or generated.waypoints,
    })


def load_scenario(source: Union[str, Path]) -> Scenario:
    """Scenario from a YAML file path or a built-in family name."""
    if isinstance(source, str) and source in SCENARIO_FAMILIES:
        return scenario_family(source)
    path = Path(source)
    if not path.exists():
        raise ConfigurationError(f"Scenario '{source}' is neither a family nor a file", fields=["scenario"])
    with open(path, "r") as f:
        raw = yaml.safe_load(f) or {}
    try:
        scenario = Scenario.model_validate(raw)
    except ValidationError as e:
        raise ConfigurationError(
            f"Invalid scenario file {path}",
            fields=[".".join(str(p) for p in err["loc"]) for err in e.errors()],
        ) from e
    logger.info(f"Loaded scenario {scenario.name} from {path}")
    return resolve_scenario(scenario)
