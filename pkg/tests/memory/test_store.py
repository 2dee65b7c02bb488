"""Tests for memory features, the memory store and its spatial queries."""
import numpy as np
import pytest

from src.core.errors import ConfigurationError, ContractViolation
from src.detection.classifier import CandidateFeature, FeatureKind
from src.memory.feature import MemoryFeature, merge
from src.memory.params import MemoryParams, memory_preset
from src.memory.store import InsertOutcome, MemoryStore


@pytest.fixture
def params():
    """Create default memory parameters."""
    return MemoryParams()


@pytest.fixture
def store(params):
    """Create an empty 2-D memory store."""
    return MemoryStore(params, state_dim=2)


def minimum(position, radius=0.5):
    """Create a local-minimum candidate."""
    return CandidateFeature(position=np.asarray(position, dtype=float), kind=FeatureKind.LOCAL_MINIMUM, radius=radius)


def feature(feature_id, position, strength=1.0, radius=0.5, kind=1, direction=None):
    """Create a stored feature."""
    return MemoryFeature(
        id=feature_id,
        position=np.asarray(position, dtype=float),
        radius=radius,
        strength=strength,
        kind=kind,
        direction=None if direction is None else np.asarray(direction, dtype=float),
    )


def test_feature_invariants():
    """Test radius, strength and direction contracts."""
    with pytest.raises(ContractViolation):
        feature(0, [0.0, 0.0], radius=0.0)
    with pytest.raises(ContractViolation):
        feature(0, [0.0, 0.0], strength=0.0)
    with pytest.raises(ContractViolation):
        feature(0, [0.0, 0.0], kind=2)
    with pytest.raises(ContractViolation):
        feature(0, [0.0, 0.0], kind=1, direction=[1.0, 0.0])


def test_params_validation():
    """Test strength ordering and named presets."""
    with pytest.raises(ValueError):
        MemoryParams(min_strength=2.0, initial_strength=1.0)
    assert memory_preset("robot").decay == 0.95
    assert memory_preset("standard").decay == 0.99
    with pytest.raises(ConfigurationError):
        memory_preset("unknown")


def test_merge_direct_substitution():
    """Test the consolidation formulas in 1-D."""
    merged = merge(feature(0, [0.0], radius=1.0), feature(1, [2.0], radius=1.0), max_strength=5.0)
    np.testing.assert_allclose(merged.position, [1.0])
    assert merged.radius == pytest.approx(2.0)
    assert merged.strength == pytest.approx(2.0)
    assert merged.id == 0


def test_merge_identical_caps_strength():
    """Test merging a feature with itself."""
    a = feature(0, [1.0, 1.0], strength=3.0)
    merged = merge(a, a, max_strength=5.0)
    np.testing.assert_allclose(merged.position, a.position)
    assert merged.radius == a.radius
    assert merged.strength == 5.0


def test_merge_radius_never_shrinks():
    """Test r' ≥ max(r_a, r_b)."""
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = feature(0, rng.normal(size=2), strength=rng.uniform(0.2, 2), radius=rng.uniform(0.1, 2))
        b = feature(1, rng.normal(size=2), strength=rng.uniform(0.2, 2), radius=rng.uniform(0.1, 2))
        merged = merge(a, b, max_strength=5.0)
        assert merged.radius >= max(a.radius, b.radius)
        assert merged.strength == pytest.approx(a.strength + b.strength)


def test_merge_directions():
    """Test weighted directions and the cancelling case."""
    a = feature(0, [0.0, 0.0], kind=2, direction=[1.0, 0.0])
    b = feature(1, [0.1, 0.0], kind=2, direction=[0.0, 1.0])
    np.testing.assert_allclose(merge(a, b, 5.0).direction, [np.sqrt(0.5), np.sqrt(0.5)])
    c = feature(1, [0.1, 0.0], kind=2, direction=[-1.0, 0.0])
    np.testing.assert_array_equal(merge(a, c, 5.0).direction, [1.0, 0.0])


def test_merge_kind_mismatch():
    """Test that different kinds cannot merge."""
    with pytest.raises(ContractViolation):
        merge(feature(0, [0.0, 0.0]), feature(1, [0.0, 0.0], kind=3, direction=[1.0, 0.0]), 5.0)


def test_query_empty_and_center(store):
    """Test queries on an empty store and at a feature center."""
    assert store.query_active([0.0, 0.0]) == []
    store.insert(minimum([1.0, 1.0]))
    active = store.query_active([1.0, 1.0])
    assert len(active) == 1
    assert active[0][1] == 0.0


def test_insert_into_empty_store(store, params):
    """Test that the first candidate is appended with γ₀."""
    assert store.insert(minimum([0.0, 0.0])) == InsertOutcome.ADDED
    assert len(store) == 1
    assert store.features[0].strength == params.initial_strength


def test_duplicate_same_kind_merges(store):
    """Test the merge branch."""
    store.insert(minimum([0.0, 0.0]))
    assert store.insert(minimum([0.0, 0.0])) == InsertOutcome.MERGED
    assert len(store) == 1
    assert store.features[0].strength == pytest.approx(2.0)


def test_near_different_kind_dropped(store):
    """Test the novelty rule for a candidate close to another kind."""
    store.insert(minimum([0.0, 0.0]))
    near = CandidateFeature(position=np.array([0.05, 0.0]), kind=2, radius=0.5, direction=np.array([1.0, 0.0]))
    assert store.insert(near) == InsertOutcome.DROPPED
    assert len(store) == 1


def test_merge_chooses_smallest_ratio(store):
    """Test tie-breaking by ‖m_new − m_i‖ / r_i."""
    store.insert(minimum([0.0, 0.0], radius=1.0))
    store.insert(minimum([2.0, 0.0], radius=1.0))
    assert store.insert(minimum([1.2, 0.0], radius=0.5)) == InsertOutcome.MERGED
    # ratios are 1.2 to feature 0 and 0.8 to feature 1
    assert store.get(0).strength == pytest.approx(1.0)
    assert store.get(1).strength == pytest.approx(2.0)
    np.testing.assert_allclose(store.get(1).position, [1.6, 0.0])


def test_capacity_evicts_weakest():
    """Test eviction of the lowest strength at capacity."""
    params = MemoryParams(capacity=3)
    store = MemoryStore.restore(
        params,
        [feature(0, [0.0, 0.0], 0.2), feature(1, [5.0, 0.0], 1.0), feature(2, [10.0, 0.0], 2.0)],
        step=0,
        next_id=3,
    )
    assert store.insert(minimum([20.0, 0.0])) == InsertOutcome.ADDED
    assert len(store) == 3
    assert store.get(0) is None
    assert store.get(3) is not None


def test_strength_increment_and_cap(params):
    """Test growth while stagnating inside and the γ_max cap."""
    store = MemoryStore.restore(params, [feature(0, [0.0, 0.0], 1.0), feature(1, [5.0, 5.0], 4.95)], step=0, next_id=2)
    store.update_strengths([0.0, 0.0], stagnating=True)
    store.update_strengths([5.0, 5.0], stagnating=True)
    assert store.get(0).strength == pytest.approx(1.1)
    assert store.get(1).strength == pytest.approx(5.0)


def test_strength_unchanged_inside_without_stagnation(params):
    """Test that passing through a feature does not grow it."""
    store = MemoryStore.restore(params, [feature(0, [0.0, 0.0], 1.0)], step=0, next_id=1)
    store.update_strengths([0.1, 0.0], stagnating=False)
    assert store.get(0).strength == 1.0


def test_decay_after_threshold():
    """Test β_decay once a feature has been neglected long enough."""
    params = MemoryParams(decay_after=0)
    store = MemoryStore.restore(params, [feature(0, [0.0, 0.0], 1.0)], step=0, next_id=1)
    store.update([10.0, 10.0])
    assert store.get(0).strength == 1.0
    store.update([10.0, 10.0])
    assert store.get(0).strength == pytest.approx(0.99)


def test_escape_direction_refines_fallback(store):
    """Test that leaving a κ=2 feature replaces its fallback direction."""
    candidate = CandidateFeature(position=np.array([0.0, 0.0]), kind=2, radius=0.5, direction=np.array([1.0, 0.0]))
    store.update([0.0, 0.0], candidate)
    store.update([0.0, 0.2])
    np.testing.assert_array_equal(store.features[0].direction, [1.0, 0.0])
    store.update([0.0, 1.0])
    np.testing.assert_allclose(store.features[0].direction, [0.0, 1.0])
    assert store.pending_direction == []


def test_prune_rules(params):
    """Test removal below γ_min."""
    store = MemoryStore.restore(params, [feature(0, [0.0, 0.0], 0.05), feature(1, [3.0, 0.0], 0.5)], step=0, next_id=2)
    assert store.prune() == 1
    assert [f.id for f in store.features] == [1]
    assert store.prune() == 0
    assert MemoryStore(params).prune() == 0


def test_update_without_candidate_on_empty_store(store):
    """Test that an empty update only advances the step."""
    assert store.update([0.0, 0.0]) is None
    assert len(store) == 0
    assert store.step == 1


def test_repeated_stagnation_consolidates(store):
    """Test that 40 stagnant steps at one point leave one growing feature."""
    strengths = []
    for _ in range(40):
        store.update([1.0, -1.0], minimum([1.0, -1.0], radius=0.125), stagnating=True)
        strengths.append(store.features[0].strength)
    assert len(store) == 1
    assert all(b >= a for a, b in zip(strengths, strengths[1:]))
    assert strengths[-1] > strengths[0]


def test_query_matches_linear_scan(params):
    """Test oracle equivalence of radius queries."""
    rng = np.random.default_rng(1)
    store = MemoryStore(params.model_copy(update={"novelty_distance": 0.0, "merge_ratio": 1e-9}), state_dim=2)
    for _ in range(100):
        store.insert(minimum(rng.uniform(-5, 5, size=2), radius=rng.uniform(0.2, 1.5)))
    features = store.features
    for x in rng.uniform(-6, 6, size=(1000, 2)):
        expected = [f.id for f in features if np.linalg.norm(x - f.position) <= f.radius]
        assert [f.id for f, _ in store.query_active(x)] == expected


def test_snapshot_pairs_match_brute_force(params):
    """Test snapshot active pairs against all pairwise distances."""
    rng = np.random.default_rng(2)
    store = MemoryStore(params.model_copy(update={"novelty_distance": 0.0, "merge_ratio": 1e-9}), state_dim=2)
    for _ in range(20):
        store.insert(minimum(rng.uniform(-3, 3, size=2), radius=rng.uniform(0.3, 1.0)))
    snapshot = store.snapshot()
    points = rng.uniform(-4, 4, size=(300, 2))
    points[5] = np.nan
    point_idx, feature_idx, distances = snapshot.active_pairs(points)

    all_distances = np.linalg.norm(points[:, None, :] - snapshot.positions[None], axis=2)
    expected = {(p, f) for p, f in zip(*np.nonzero(all_distances <= snapshot.radii)) if p != 5}
    assert set(zip(point_idx.tolist(), feature_idx.tolist())) == expected
    np.testing.assert_allclose(distances, all_distances[point_idx, feature_idx])


def test_snapshot_tree_survives_strength_updates(params):
    """Test that the position tree is reused until a feature is added, moved or removed."""
    store = MemoryStore(params.model_copy(update={"decay_after": 0}), state_dim=2)
    store.insert(minimum([0.0, 0.0]))
    store.insert(minimum([3.0, 0.0]))
    store.update([10.0, 10.0])
    first = store.snapshot()
    first.active_pairs(np.zeros((1, 2)))
    tree = first.tree

    for _ in range(3):
        store.update([10.0, 10.0])
        current = store.snapshot()
        assert current is not first
        assert current.strengths[0] < first.strengths[0]
        assert current.tree is tree

    store.insert(minimum([-3.0, 0.0]))
    moved = store.snapshot()
    assert moved.tree is not tree
    assert len(moved.tree.data) == 3


def test_snapshot_is_read_only(store):
    """Test that snapshot arrays cannot be written."""
    store.insert(minimum([0.0, 0.0]))
    snapshot = store.snapshot()
    with pytest.raises(ValueError):
        snapshot.positions[0, 0] = 1.0
    assert store.snapshot() is snapshot


def test_identical_sequences_identical_stores(params):
    """Test determinism of the update dynamics."""
    def run():
        rng = np.random.default_rng(7)
        s = MemoryStore(params, state_dim=2)
        for _ in range(200):
            x = rng.uniform(-2, 2, size=2)
            candidate = minimum(x, radius=0.3) if rng.random() < 0.3 else None
            s.update(x, candidate, stagnating=bool(rng.random() < 0.5))
        return [(f.id, f.position.tolist(), f.radius, f.strength) for f in s.features]

    assert run() == run()


def run_fuzz(operations, seed):
    """Apply random operations and check every store invariant after each."""
    rng = np.random.default_rng(seed)
    params = MemoryParams(capacity=25, decay_after=5, decay=0.9, novelty_distance=0.05)
    store = MemoryStore(params, state_dim=2)
    for _ in range(operations):
        x = rng.uniform(-4, 4, size=2)
        op = rng.integers(3)
        if op == 0:
            kind = int(rng.integers(1, 4))
            direction = None
            if kind != 1:
                direction = rng.normal(size=2)
                direction /= np.linalg.norm(direction)
            store.insert(CandidateFeature(position=x, kind=kind, radius=rng.uniform(0.1, 1.0), direction=direction))
        elif op == 1:
            store.update(x, stagnating=bool(rng.random() < 0.5))
        else:
            store.prune()

        assert len(store) <= params.capacity
        for f in store.features:
            assert params.min_strength <= f.strength <= params.max_strength
            assert f.radius > 0.0
            if f.kind == FeatureKind.LOCAL_MINIMUM:
                assert f.direction is None
            else:
                assert abs(np.linalg.norm(f.direction) - 1.0) <= 1e-9
        q = rng.uniform(-5, 5, size=2)
        expected = [f.id for f in store.features if np.linalg.norm(q - f.position) <= f.radius]
        assert [f.id for f, _ in store.query_active(q)] == expected


def test_fuzz_store_invariants():
    """Test invariants over a random operation sequence."""
    run_fuzz(3000, seed=0)


@pytest.mark.performance
def test_fuzz_store_invariants_long():
    """Test invariants over 10⁵ random operations."""
    run_fuzz(100_000, seed=1)
