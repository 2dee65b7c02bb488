"""
The evolving memory store M.
"""
import logging
from collections import Counter
from dataclasses import replace
from enum import Enum
from typing import Dict, List, Optional, Set, Tuple

import numpy as np
from numpy.typing import ArrayLike

from ..core.types import as_state
from ..detection.classifier import CandidateFeature, FeatureKind, escape_direction
from ..monitoring.metrics import metrics
from .feature import MemoryFeature, merge
from .index import FeatureIndex
from .params import MemoryParams
from .snapshot import MemorySnapshot

logger = logging.getLogger(__name__)


class InsertOutcome(str, Enum):
    """What happened to an inserted candidate."""
    ADDED = "added"
    MERGED = "merged"
    DROPPED = "dropped"


class MemoryStore:
    """Bounded, spatially indexed set of memory features.

    The store is mutated only between control steps; rollouts read a
    ``MemorySnapshot``.
    """

    def __init__(self, params: MemoryParams, state_dim: Optional[int] = None):
        self.params = params
        self.state_dim = state_dim
        self.step = 0
        self._features: Dict[int, MemoryFeature] = {}
        self._next_id = 0
        # Features still carrying a fallback direction
        self._pending_direction: Set[int] = set()
        self._index = FeatureIndex()
        self._snapshot: Optional[MemorySnapshot] = None
        # Last snapshot whose positions and radii are still current
        self._geometry: Optional[MemorySnapshot] = None

    def __len__(self) -> int:
        return len(self._features)

    @property
    def features(self) -> List[MemoryFeature]:
        return [self._features[i] for i in sorted(self._features)]

    def get(self, feature_id: int) -> Optional[MemoryFeature]:
        return self._features.get(feature_id)

    def kind_counts(self) -> Dict[int, int]:
        counts = Counter(int(f.kind) for f in self._features.values())
        return {int(kind): counts.get(int(kind), 0) for kind in FeatureKind}

    def _changed(self) -> None:
        self._snapshot = None

    def _moved(self) -> None:
        self._geometry = None
        self._changed()

    def _put(self, feature: MemoryFeature) -> None:
        self._features[feature.id] = feature
        self._index.mark(feature.id, self._features)
        self._moved()

    def _remove(self, feature_ids: List[int]) -> None:
        for feature_id in feature_ids:
            del self._features[feature_id]
            self._pending_direction.discard(feature_id)
        self._index.rebuild(self._features)
        self._moved()

    def query_active(self, x: ArrayLike) -> List[Tuple[MemoryFeature, float]]:
        """Features whose influence region contains x, with distances."""
        return self._index.query(as_state(x), self._features)

    def insert(self, candidate: CandidateFeature) -> InsertOutcome:
        """Merge, append or drop a candidate.

        A same-kind feature with ‖m_new − m_i‖ / r_i < θ_merge absorbs the
        candidate (the smallest ratio wins). Otherwise the candidate is appended
        if it lies farther than θ_dist from every feature, evicting the weakest
        feature when the store is full, and dropped if not.
        """
        params = self.params
        incoming = MemoryFeature.from_candidate(candidate, -1, params.initial_strength, self.step)
        if self.state_dim is None:
            self.state_dim = incoming.position.size

        best: Optional[Tuple[float, int]] = None
        nearest = np.inf
        for feature_id, feature in self._features.items():
            distance = feature.distance(incoming.position)
            nearest = min(nearest, distance)
            if feature.kind != incoming.kind:
                continue
            ratio = distance / feature.radius
            if ratio < params.merge_ratio and (best is None or (ratio, feature_id) < best):
                best = (ratio, feature_id)

        if best is not None:
            merged = merge(self._features[best[1]], incoming, params.max_strength)
            self._put(merged)
            metrics.record_memory_event("merged")
            logger.debug(f"Merged kind {int(merged.kind)} candidate into feature {merged.id}")
            return InsertOutcome.MERGED

        if nearest <= params.novelty_distance:
            metrics.record_memory_event("dropped")
            return InsertOutcome.DROPPED

        if len(self._features) >= params.capacity:
            weakest = min(self._features.values(), key=lambda f: (f.strength, f.created_step, f.id))
            self._remove([weakest.id])
            metrics.record_memory_event("evicted")
            logger.debug(f"Evicted feature {weakest.id} with strength {weakest.strength:.3f}")

        feature = replace(incoming, id=self._next_id)
        self._next_id += 1
        self._put(feature)
        if feature.kind != FeatureKind.LOCAL_MINIMUM:
            self._pending_direction.add(feature.id)
        metrics.record_memory_event("added")
        logger.debug(f"Added kind {int(feature.kind)} feature {feature.id}")
        return InsertOutcome.ADDED

    def update_strengths(self, x: ArrayLike, stagnating: bool) -> None:
        """Grow features re-encountered during stagnation and decay neglected ones.

        Leaving a feature for the first time also replaces its fallback
        direction with the observed escape direction.
        """
        state = as_state(x)
        params = self.params
        for feature_id in sorted(self._features):
            feature = self._features[feature_id]
            updated = feature
            if feature.contains(state):
                strength = feature.strength
                if stagnating:
                    strength = min(params.max_strength, strength + params.strength_increment)
                updated = replace(feature, strength=strength, last_inside_step=self.step)
            else:
                if feature_id in self._pending_direction:
                    updated = replace(updated, direction=escape_direction(state[np.newaxis], feature.position, feature.radius))
                    self._pending_direction.discard(feature_id)
                if self.step - feature.last_inside_step > params.decay_after:
                    updated = replace(updated, strength=updated.strength * params.decay)
            if updated is not feature:
                self._features[feature_id] = updated
                if updated.strength != feature.strength or updated.direction is not feature.direction:
                    self._changed()

    def prune(self) -> int:
        """Remove every feature weaker than γ_min; returns the number removed."""
        weak = [i for i, f in self._features.items() if f.strength < self.params.min_strength]
        if weak:
            self._remove(weak)
            metrics.record_memory_event("pruned", len(weak))
            logger.debug(f"Pruned {len(weak)} features")
        return len(weak)

    def update(
        self,
        x: ArrayLike,
        candidate: Optional[CandidateFeature] = None,
        stagnating: bool = False,
    ) -> Optional[InsertOutcome]:
        """One memory update U(M_t, x_t, ξ_t): strengths, insert, prune, advance."""
        self.update_strengths(x, stagnating)
        outcome = self.insert(candidate) if candidate is not None else None
        self.prune()
        self.step += 1
        metrics.update_memory_size(len(self._features))
        return outcome

    def snapshot(self) -> MemorySnapshot:
        """Immutable view of the current features, cached until the next change."""
        if self._snapshot is None:
            self._snapshot = MemorySnapshot.from_features(self.features, self.state_dim or 0, geometry=self._geometry)
            self._geometry = self._snapshot
        return self._snapshot

    def clear(self) -> None:
        self._features.clear()
        self._pending_direction.clear()
        self._index.rebuild(self._features)
        self.step = 0
        self._moved()

    @classmethod
    def restore(
        cls,
        params: MemoryParams,
        features: List[MemoryFeature],
        step: int,
        next_id: int,
        pending_direction: Optional[List[int]] = None,
        state_dim: Optional[int] = None,
    ) -> "MemoryStore":
        """Rebuild a store from persisted features."""
        store = cls(params, state_dim=state_dim)
        store.step = step
        store._features = {f.id: f for f in features}
        store._next_id = max([next_id] + [f.id + 1 for f in features])
        store._pending_direction = set(pending_direction or []) & set(store._features)
        if store.state_dim is None and features:
            store.state_dim = features[0].position.size
        store._index.rebuild(store._features)
        return store

    @property
    def next_id(self) -> int:
        return self._next_id

    @property
    def pending_direction(self) -> List[int]:
        return sorted(self._pending_direction)
