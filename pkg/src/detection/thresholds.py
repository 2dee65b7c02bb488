"""
Detection thresholds and cadences.
"""
from pydantic import BaseModel, ConfigDict, Field

FINITE_DIFFERENCE_FACTOR = 1e-4
MIN_RADIUS_FACTOR = 0.05


class DetectionThresholds(BaseModel):
    """Parameters of the topological feature detector.

    Attributes:
        variance_threshold: θ_var, stagnation when the window variance is below it
        gradient_threshold: θ_grad, low-gradient region when ‖∇V‖ is below it
        curvature_threshold: θ_curv, bound on the Hessian condition number
        angle_threshold: θ_angle, radians of gradient direction change
        window: K_w, number of states in the stagnation window
        stagnation_cadence: Steps between stagnation checks
        gradient_cadence: Steps between gradient checks
        curvature_cadence: Steps between curvature checks
        radius_gain: κ_r, suggested radius = κ_r · max(spread, r_min)
        characteristic_scale: State scale setting the finite-difference step and r_min
        gradient_checks: Enable low-gradient and angle detection
        curvature_checks: Enable condition-number detection
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    variance_threshold: float = Field(default=0.01, ge=0.0)
    gradient_threshold: float = Field(default=0.05, ge=0.0)
    curvature_threshold: float = Field(default=100.0, ge=1.0)
    angle_threshold: float = Field(default=1.0, gt=0.0)
    window: int = Field(default=20, ge=2)
    stagnation_cadence: int = Field(default=1, ge=1)
    gradient_cadence: int = Field(default=5, ge=1)
    curvature_cadence: int = Field(default=20, ge=1)
    radius_gain: float = Field(default=2.5, gt=0.0)
    characteristic_scale: float = Field(default=1.0, gt=0.0)
    gradient_checks: bool = True
    curvature_checks: bool = True

    @property
    def step_size(self) -> float:
        """Finite-difference step h."""
        return FINITE_DIFFERENCE_FACTOR * self.characteristic_scale

    @property
    def min_radius(self) -> float:
        """Radius floor r_min."""
        return MIN_RADIUS_FACTOR * self.characteristic_scale
