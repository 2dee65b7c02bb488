"""Tests for seeded Gaussian noise."""
import numpy as np
import pytest

from src.core.errors import ContractViolation
from src.core.noise import NoiseModel, covariance_factor, seeded_gaussian, spawn_streams


def test_zero_covariance_gives_zero_samples():
    """Test that Σ = 0 produces only zeros."""
    samples = seeded_gaussian(NoiseModel(covariance=np.zeros((3, 3)), seed=1), 50)
    assert samples.shape == (50, 3)
    assert np.all(samples == 0.0)


def test_same_seed_same_sequence():
    """Test that a seed reproduces its sequence exactly."""
    noise = NoiseModel(covariance=np.eye(2), seed=42)
    np.testing.assert_array_equal(seeded_gaussian(noise, 20), seeded_gaussian(noise, 20))


def test_different_seeds_differ():
    """Test that streams for distinct seeds differ."""
    for seed in range(100):
        a = seeded_gaussian(NoiseModel(covariance=np.eye(2), seed=seed), 5)
        b = seeded_gaussian(NoiseModel(covariance=np.eye(2), seed=seed + 1000), 5)
        assert np.any(a != b)


def test_identity_covariance_is_recovered():
    """Test that the sample covariance of 100k draws is close to I."""
    samples = seeded_gaussian(NoiseModel(covariance=np.eye(2), seed=7), 100_000)
    empirical = np.cov(samples, rowvar=False)
    np.testing.assert_allclose(empirical, np.eye(2), atol=0.05)


def test_singular_covariance_factor():
    """Test that a PSD but singular covariance is factored exactly."""
    sigma = np.array([[1.0, 1.0], [1.0, 1.0]])
    factor = covariance_factor(sigma)
    np.testing.assert_allclose(factor @ factor.T, sigma, atol=1e-12)


def test_indefinite_covariance_rejected():
    """Test that a covariance with a negative eigenvalue is rejected."""
    with pytest.raises(ContractViolation):
        NoiseModel(covariance=np.array([[1.0, 0.0], [0.0, -0.5]]))


def test_asymmetric_covariance_rejected():
    """Test that an asymmetric covariance is rejected."""
    with pytest.raises(ContractViolation):
        covariance_factor(np.array([[1.0, 0.1], [0.0, 1.0]]))


def test_negative_count_rejected():
    """Test that a negative sample count raises."""
    with pytest.raises(ContractViolation):
        seeded_gaussian(NoiseModel(covariance=np.eye(1)), -1)


def test_spawn_streams_are_independent_and_reproducible():
    """Test that spawned streams differ from each other but repeat per seed."""
    first = [g.standard_normal(4) for g in spawn_streams(5, 3)]
    again = [g.standard_normal(4) for g in spawn_streams(5, 3)]
    for a, b in zip(first, again):
        np.testing.assert_array_equal(a, b)
    assert np.any(first[0] != first[1])
