"""Tests for streaming statistics and sample comparison."""
import math

import numpy as np
import pytest

from src.bench.stats import RunningStats, compare_samples, two_pass_stats
from src.core.errors import ContractViolation


def test_running_stats_match_two_pass():
    """Test Welford accumulation against the two-pass formulas."""
    values = np.random.default_rng(3).normal(1e3, 5.0, size=1000)
    running = RunningStats().extend(values)
    mean, std = two_pass_stats(values)
    assert running.count == 1000
    assert running.mean == pytest.approx(mean, abs=1e-9)
    assert running.std == pytest.approx(std, abs=1e-9)


def test_running_stats_edge_counts():
    """Test empty and single-value accumulators."""
    empty = RunningStats()
    assert math.isnan(empty.mean) and math.isnan(empty.std)
    single = RunningStats().extend([4.0])
    assert single.mean == 4.0
    assert single.std == 0.0


def test_compare_separated_samples():
    """Test that fully separated samples give superiority 1 and a small p-value."""
    result = compare_samples("reward", [10, 11, 12, 13, 14, 15], [1, 2, 3, 4, 5, 6])
    assert result.superiority == 1.0
    assert result.p_value < 0.01
    assert (result.n_a, result.n_b) == (6, 6)


def test_compare_identical_samples():
    """Test that identical samples are indistinguishable."""
    result = compare_samples("reward", [1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert result.superiority == pytest.approx(0.5)
    assert result.p_value > 0.5


def test_compare_drops_non_finite():
    """Test that infinite sentinels are ignored and all-infinite samples rejected."""
    result = compare_samples("efficiency", [1.0, math.inf, 2.0], [3.0, 4.0])
    assert result.n_a == 2
    with pytest.raises(ContractViolation):
        compare_samples("efficiency", [math.inf], [1.0])
