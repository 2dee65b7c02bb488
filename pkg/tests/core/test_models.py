"""Tests for domain types, dynamics steps and trajectory costs."""
import math

import numpy as np
import pytest

from src.core.errors import ContractViolation
from src.core.models import dynamics_step, trajectory_cost
from src.core.types import Trajectory, as_state
from src.envs.pendulum import PendulumEnv
from tests.fixtures.models import ConstantCost, ExplodingCost, IdentityModel, QuadraticCost


@pytest.fixture
def identity():
    """Create a 2-D identity model."""
    return IdentityModel(state_dim=2, control_dim=1)


def test_as_state_rejects_non_finite():
    """Test that state vectors must be finite."""
    with pytest.raises(ContractViolation):
        as_state([1.0, np.nan])


def test_as_state_rejects_wrong_length():
    """Test that a state of the wrong dimension is rejected."""
    with pytest.raises(ContractViolation):
        as_state([1.0, 2.0, 3.0], dim=2)


def test_dynamics_step_identity_without_noise(identity):
    """Test that the identity model leaves the state unchanged."""
    x = np.array([0.3, -1.2])
    np.testing.assert_array_equal(dynamics_step(identity, x, [0.5]), x)


def test_dynamics_step_adds_noise(identity):
    """Test that supplied noise is added to f(x, u)."""
    x = np.array([0.3, -1.2])
    noise = np.array([0.1, 0.1])
    np.testing.assert_allclose(dynamics_step(identity, x, [0.0], noise=noise), x + noise)


def test_dynamics_step_dimension_mismatch(identity):
    """Test that mismatched state and control dimensions raise."""
    with pytest.raises(ContractViolation):
        dynamics_step(identity, [1.0, 2.0, 3.0], [0.0])
    with pytest.raises(ContractViolation):
        dynamics_step(identity, [1.0, 2.0], [0.0, 1.0])


def test_dynamics_step_is_pure():
    """Test that identical inputs give identical outputs."""
    env = PendulumEnv()
    x = np.array([0.4, 0.2])
    first = dynamics_step(env, x, [0.7])
    second = dynamics_step(env, x, [0.7])
    np.testing.assert_array_equal(first, second)


def test_pendulum_hanging_equilibrium():
    """Test that the hanging pendulum stays put under zero torque."""
    env = PendulumEnv()
    x = np.array([math.pi, 0.0])
    next_state = dynamics_step(env, x, [0.0])
    assert np.max(np.abs(next_state - x)) <= env.dt * 1e-12


def test_trajectory_requires_consistent_lengths():
    """Test that a trajectory needs one more state than controls."""
    with pytest.raises(ContractViolation):
        Trajectory(states=np.zeros((3, 1)), controls=np.zeros((3, 1)))


def test_trajectory_cost_zero_model():
    """Test that an all-zero cost model gives zero."""
    traj = Trajectory(states=np.ones((11, 2)), controls=np.ones((10, 1)))
    assert trajectory_cost(ConstantCost(), traj) == 0.0


def test_trajectory_cost_counts_stages():
    """Test that unit stage costs over H=10 sum to 10."""
    traj = Trajectory(states=np.zeros((11, 2)), controls=np.zeros((10, 1)))
    assert trajectory_cost(ConstantCost(stage=1.0, terminal=0.0), traj) == 10.0


def test_trajectory_cost_quadratic():
    """Test direct summation of a quadratic cost."""
    traj = Trajectory(states=np.array([[1.0], [2.0], [3.0]]), controls=np.zeros((2, 1)))
    assert trajectory_cost(QuadraticCost(), traj) == pytest.approx(14.0)


def test_trajectory_cost_is_additive():
    """Test that splitting a trajectory reproduces the total with one terminal cost."""
    rng = np.random.default_rng(3)
    states = rng.normal(size=(9, 2))
    controls = rng.normal(size=(8, 1))
    cost = QuadraticCost(control_weight=0.5)
    total = trajectory_cost(cost, Trajectory(states=states, controls=controls))

    k = 3
    first = float(np.sum(cost.stage_cost(states[:k], controls[:k])))
    second = float(np.sum(cost.stage_cost(states[k:-1], controls[k:])))
    assert total == pytest.approx(first + second + float(cost.terminal_cost(states[-1])), rel=1e-12)


def test_trajectory_cost_non_finite_is_infeasible():
    """Test that a non-finite stage cost yields the +inf sentinel."""
    traj = Trajectory(states=np.array([[0.0], [5.0], [0.0]]), controls=np.zeros((2, 1)))
    assert trajectory_cost(ExplodingCost(limit=1.0), traj) == math.inf
