"""
Summary statistics and head-to-head comparison.
"""
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy import stats

from ..core.errors import ContractViolation


class RunningStats:
    """Streaming mean and sample standard deviation (Welford)."""

    def __init__(self):
        self.count = 0
        self._mean = 0.0
        self._m2 = 0.0

    def push(self, value: float) -> None:
        self.count += 1
        delta = value - self._mean
        self._mean += delta / self.count
        self._m2 += delta * (value - self._mean)

    def extend(self, values: Iterable[float]) -> "RunningStats":
        for value in values:
            self.push(float(value))
        return self

    @property
    def mean(self) -> float:
        return self._mean if self.count else math.nan

    @property
    def std(self) -> float:
        """Sample standard deviation; 0 for a single value."""
        if self.count == 0:
            return math.nan
        if self.count == 1:
            return 0.0
        return math.sqrt(self._m2 / (self.count - 1))


def two_pass_stats(values: Sequence[float]) -> Tuple[float, float]:
    """Mean and sample standard deviation computed in two passes."""
    data = np.asarray(values, dtype=np.float64)
    if data.size == 0:
        return math.nan, math.nan
    mean = float(np.mean(data))
    if data.size == 1:
        return mean, 0.0
    return mean, float(np.sqrt(np.sum((data - mean) ** 2) / (data.size - 1)))


@dataclass(frozen=True)
class Comparison:
    """Rank comparison of one metric between two experiments.

    Attributes:
        metric: Metric name
        n_a: Trials in the first experiment
        n_b: Trials in the second experiment
        u_statistic: Mann-Whitney U of the first sample
        p_value: Two-sided p-value
        superiority: P(a > b) + ½ P(a = b), the U statistic over n_a · n_b
    """
    metric: str
    n_a: int
    n_b: int
    u_statistic: float
    p_value: float
    superiority: float


def compare_samples(metric: str, a: Sequence[float], b: Sequence[float]) -> Comparison:
    """Mann-Whitney U comparison of two samples of one metric."""
    xa = np.asarray(a, dtype=np.float64)
    xb = np.asarray(b, dtype=np.float64)
    xa = xa[np.isfinite(xa)]
    xb = xb[np.isfinite(xb)]
    if xa.size == 0 or xb.size == 0:
        raise ContractViolation(f"metric {metric} has no finite values in one of the samples")
    result = stats.mannwhitneyu(xa, xb, alternative="two-sided")
    u = float(result.statistic)
    p_value = float(result.pvalue) if np.isfinite(result.pvalue) else 1.0
    return Comparison(
        metric=metric,
        n_a=int(xa.size),
        n_b=int(xb.size),
        u_statistic=u,
        p_value=p_value,
        superiority=u / (xa.size * xb.size),
    )
