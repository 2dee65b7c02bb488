"""
Standard model predictive path integral control.
"""
from .config import MppiConfig
from .controller import MppiController, MppiDiagnostics, NominalPlan
from .rollout import CostAugmentation, RolloutBatch, evaluate_batch
from .sampling import sample_controls
from .weighting import effective_sample_size, mppi_weights, optimal_control

__all__ = [
    "CostAugmentation",
    "MppiConfig",
    "MppiController",
    "MppiDiagnostics",
    "NominalPlan",
    "RolloutBatch",
    "effective_sample_size",
    "evaluate_batch",
    "mppi_weights",
    "optimal_control",
    "sample_controls",
]
