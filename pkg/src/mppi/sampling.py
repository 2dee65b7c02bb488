"""
Perturbed control sequence sampling.
"""
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ContractViolation
from ..core.noise import covariance_factor
from .config import MppiConfig


def sample_controls(
    cfg: MppiConfig,
    nominal: ArrayLike,
    covariance: ArrayLike,
    rng: np.random.Generator,
    bias: Optional[ArrayLike] = None,
) -> NDArray[np.float64]:
    """Draw K control sequences around the nominal plan.

    Every sample is nominal + ε with ε ~ N(bias, Σ_u) drawn independently per
    step, clipped to the control bounds. Sample 0 is the unperturbed nominal.
    The generator always consumes K·H·m standard normals, whatever Σ_u is.

    Args:
        cfg: Controller configuration (K, H, bounds)
        nominal: Nominal plan, shape (H, m)
        covariance: Sampling covariance Σ_u, shape (m, m)
        rng: Random stream owned by the controller
        bias: Optional mean shift of the perturbations, shape (m,)

    Returns:
        Controls of shape (K, H, m)
    """
    plan = np.asarray(nominal, dtype=np.float64)
    m = cfg.control_dim
    if plan.shape != (cfg.horizon, m):
        raise ContractViolation(f"nominal plan has shape {plan.shape}, expected ({cfg.horizon}, {m})")
    factor = covariance_factor(covariance)
    if factor.shape != (m, m):
        raise ContractViolation(f"covariance has shape {factor.shape}, expected ({m}, {m})")

    perturbations = rng.standard_normal((cfg.samples, cfg.horizon, m)) @ factor.T
    if bias is not None:
        shift = np.asarray(bias, dtype=np.float64)
        if shift.shape != (m,):
            raise ContractViolation(f"bias has shape {shift.shape}, expected ({m},)")
        perturbations += shift
    perturbations[0] = 0.0

    return cfg.clip(plan[np.newaxis] + perturbations)
