"""
Noisy gradient descent on a value landscape.
"""
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ContractViolation
from ..core.types import as_state

GradientFunction = Callable[[NDArray[np.float64]], NDArray[np.float64]]
StopCondition = Callable[[NDArray[np.float64]], bool]


def noisy_descent(
    gradient: GradientFunction,
    x0: ArrayLike,
    step_size: float,
    noise_std: float,
    steps: int,
    rng: np.random.Generator,
    stop: Optional[StopCondition] = None,
) -> NDArray[np.float64]:
    """Iterate x ← x − η (∇V(x) + σ ξ) with ξ ~ N(0, I).

    Args:
        gradient: ∇V
        x0: Start point
        step_size: η
        noise_std: σ of the gradient noise
        steps: Maximum number of iterations
        rng: Random stream
        stop: Optional predicate ending the run early once it holds

    Returns:
        Visited points including x0, shape (≤ steps + 1, n)
    """
    if steps < 0 or not step_size > 0.0 or noise_std < 0.0:
        raise ContractViolation("noisy descent needs steps ≥ 0, step_size > 0 and noise_std ≥ 0")
    x = as_state(x0)
    path = [x]
    for _ in range(steps):
        noise = noise_std * rng.standard_normal(x.size)
        x = x - step_size * (np.asarray(gradient(x), dtype=np.float64) + noise)
        path.append(x)
        if stop is not None and stop(x):
            break
    return np.stack(path)
