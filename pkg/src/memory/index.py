"""
Spatial index over feature positions.

A k-d tree snapshot covers the features present at the last build; features
added or moved since then are kept in a dirty set and scanned linearly.
Removals force a rebuild.
"""
import math
from typing import Dict, List, Set, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.spatial import cKDTree

from .feature import MemoryFeature

MIN_REBUILD_MUTATIONS = 16


class FeatureIndex:
    """Radius queries over a mutable feature collection."""

    def __init__(self):
        self._tree = None
        self._ids: NDArray[np.int64] = np.empty(0, dtype=np.int64)
        self._max_radius = 0.0
        self._dirty: Set[int] = set()
        self.builds = 0

    def rebuild(self, features: Dict[int, MemoryFeature]) -> None:
        self._dirty.clear()
        self.builds += 1
        if not features:
            self._tree = None
            self._ids = np.empty(0, dtype=np.int64)
            self._max_radius = 0.0
            return
        ordered = sorted(features)
        self._ids = np.asarray(ordered, dtype=np.int64)
        self._tree = cKDTree(np.stack([features[i].position for i in ordered]))
        self._max_radius = max(features[i].radius for i in ordered)

    def mark(self, feature_id: int, features: Dict[int, MemoryFeature]) -> None:
        """Record an added or moved feature; rebuild once enough have piled up."""
        self._dirty.add(feature_id)
        if len(self._dirty) > max(MIN_REBUILD_MUTATIONS, len(features) // 4):
            self.rebuild(features)

    @property
    def pending(self) -> int:
        return len(self._dirty)

    def query(self, x: NDArray[np.float64], features: Dict[int, MemoryFeature]) -> List[Tuple[MemoryFeature, float]]:
        """Features with ‖x − m‖ ≤ r, ordered by id, with their distances."""
        candidates: Set[int] = set(i for i in self._dirty if i in features)
        if self._tree is not None:
            hits = self._tree.query_ball_point(x, r=self._max_radius * (1.0 + 1e-12))
            candidates.update(int(self._ids[h]) for h in hits if int(self._ids[h]) not in self._dirty)

        active = []
        for feature_id in sorted(candidates):
            feature = features.get(feature_id)
            if feature is None:
                continue
            distance = feature.distance(x)
            if distance <= feature.radius and math.isfinite(distance):
                active.append((feature, distance))
        return active
