"""
Topological feature detection from the running state and gradient history.
"""
from .classifier import (
    CandidateFeature,
    CurvatureSignal,
    FeatureKind,
    GradientSignal,
    classify,
    escape_direction,
    fallback_direction,
)
from .detector import DetectionResult, FeatureDetector
from .signals import (
    detect_stagnation,
    gradient_angle_change,
    hessian_condition,
    numeric_gradient,
    numeric_hessian,
    state_variance,
)
from .thresholds import DetectionThresholds
from .window import StateWindow

__all__ = [
    "CandidateFeature",
    "CurvatureSignal",
    "DetectionResult",
    "DetectionThresholds",
    "FeatureDetector",
    "FeatureKind",
    "GradientSignal",
    "StateWindow",
    "classify",
    "detect_stagnation",
    "escape_direction",
    "fallback_direction",
    "gradient_angle_change",
    "hessian_condition",
    "numeric_gradient",
    "numeric_hessian",
    "state_variance",
]
