"""
Immutable array view of the memory handed to rollout evaluation.
"""
from dataclasses import dataclass, field
from itertools import chain
from typing import Iterable, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.spatial import cKDTree

from ..detection.classifier import FeatureKind
from .feature import MemoryFeature

# Relative slack of the tree query; exact membership is decided afterwards
QUERY_SLACK = 1e-9


def _frozen(array: NDArray) -> NDArray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class MemorySnapshot:
    """Feature arrays aligned by row.

    A k-d tree over the positions is built on the first query and handed on
    to later snapshots whose positions and radii are unchanged.

    Attributes:
        positions: Shape (F, n)
        radii: Shape (F,)
        strengths: Shape (F,)
        kinds: Shape (F,), values in {1, 2, 3}
        directions: Shape (F, n); zero rows for local minima
    """
    positions: NDArray[np.float64]
    radii: NDArray[np.float64]
    strengths: NDArray[np.float64]
    kinds: NDArray[np.int64]
    directions: NDArray[np.float64]
    _tree: Optional[cKDTree] = field(default=None, init=False, repr=False, compare=False)

    @classmethod
    def from_features(
        cls,
        features: Iterable[MemoryFeature],
        state_dim: int,
        geometry: Optional["MemorySnapshot"] = None,
    ) -> "MemorySnapshot":
        """Snapshot of ``features``; ``geometry`` is an earlier snapshot with the same positions and radii."""
        features = list(features)
        if not features:
            return cls.empty(state_dim)
        snapshot = cls(
            positions=_frozen(np.stack([f.position for f in features])),
            radii=_frozen(np.array([f.radius for f in features], dtype=np.float64)),
            strengths=_frozen(np.array([f.strength for f in features], dtype=np.float64)),
            kinds=_frozen(np.array([int(f.kind) for f in features], dtype=np.int64)),
            directions=_frozen(np.stack([
                f.direction if f.direction is not None else np.zeros(state_dim) for f in features
            ])),
        )
        if geometry is not None and geometry._tree is not None:
            object.__setattr__(snapshot, "_tree", geometry._tree)
        return snapshot

    @classmethod
    def empty(cls, state_dim: int) -> "MemorySnapshot":
        return cls(
            positions=_frozen(np.empty((0, state_dim))),
            radii=_frozen(np.empty(0)),
            strengths=_frozen(np.empty(0)),
            kinds=_frozen(np.empty(0, dtype=np.int64)),
            directions=_frozen(np.empty((0, state_dim))),
        )

    def __len__(self) -> int:
        return self.radii.shape[0]

    @property
    def state_dim(self) -> int:
        return self.positions.shape[1]

    def kind_mask(self, kind: FeatureKind) -> NDArray[np.bool_]:
        return self.kinds == int(kind)

    @property
    def tree(self) -> Optional[cKDTree]:
        """k-d tree over the feature positions, None without features."""
        if self._tree is None and len(self) > 0:
            object.__setattr__(self, "_tree", cKDTree(self.positions))
        return self._tree

    def active_pairs(self, points: ArrayLike) -> Tuple[NDArray[np.int64], NDArray[np.int64], NDArray[np.float64]]:
        """All (point, feature) pairs with ‖x_p − m_f‖ ≤ r_f.

        Non-finite points never match.

        Args:
            points: Query points, shape (P, n)

        Returns:
            Point indices, feature indices and distances, ordered by feature
            then point
        """
        queries = np.asarray(points, dtype=np.float64)
        empty = (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64), np.empty(0))
        if len(self) == 0 or queries.shape[0] == 0:
            return empty
        finite = np.flatnonzero(np.all(np.isfinite(queries), axis=1))
        if finite.size == 0:
            return empty

        reach = float(self.radii.max()) * (1.0 + QUERY_SLACK)
        hits = self.tree.query_ball_point(queries[finite], r=reach)
        counts = np.fromiter((len(h) for h in hits), dtype=np.int64, count=len(hits))
        total = int(counts.sum())
        if total == 0:
            return empty
        point_idx = np.repeat(finite, counts)
        feature_idx = np.fromiter(chain.from_iterable(hits), dtype=np.int64, count=total)
        order = np.lexsort((point_idx, feature_idx))
        point_idx, feature_idx = point_idx[order], feature_idx[order]

        distances = np.linalg.norm(queries[point_idx] - self.positions[feature_idx], axis=1)
        inside = distances <= self.radii[feature_idx]
        return point_idx[inside], feature_idx[inside], distances[inside]
