"""
JSON persistence of memory stores.
"""
import logging
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, ValidationError

from ..core.errors import ConfigurationError
from .feature import MemoryFeature
from .params import MemoryParams
from .store import MemoryStore

logger = logging.getLogger(__name__)

DOCUMENT_VERSION = 1


class FeatureRecord(BaseModel):
    """Serialized form of one MemoryFeature."""
    model_config = ConfigDict(extra="forbid")

    id: int
    position: List[float]
    radius: float
    strength: float
    kind: int
    direction: Optional[List[float]] = None
    last_inside_step: int
    created_step: int

    @classmethod
    def from_feature(cls, feature: MemoryFeature) -> "FeatureRecord":
        return cls(
            id=feature.id,
            position=feature.position.tolist(),
            radius=feature.radius,
            strength=feature.strength,
            kind=int(feature.kind),
            direction=None if feature.direction is None else feature.direction.tolist(),
            last_inside_step=feature.last_inside_step,
            created_step=feature.created_step,
        )

    def to_feature(self) -> MemoryFeature:
        return MemoryFeature(**self.model_dump())


class MemoryDocument(BaseModel):
    """A persisted memory store."""
    model_config = ConfigDict(extra="forbid")

    version: int = DOCUMENT_VERSION
    step: int
    next_id: int
    state_dim: Optional[int] = None
    params: MemoryParams
    pending_direction: List[int] = []
    features: List[FeatureRecord]


def to_document(store: MemoryStore) -> MemoryDocument:
    return MemoryDocument(
        step=store.step,
        next_id=store.next_id,
        state_dim=store.state_dim,
        params=store.params,
        pending_direction=store.pending_direction,
        features=[FeatureRecord.from_feature(f) for f in store.features],
    )


def from_document(document: MemoryDocument) -> MemoryStore:
    return MemoryStore.restore(
        params=document.params,
        features=[record.to_feature() for record in document.features],
        step=document.step,
        next_id=document.next_id,
        pending_direction=document.pending_direction,
        state_dim=document.state_dim,
    )


def dumps(store: MemoryStore) -> str:
    """Serialize a store to JSON; floats round-trip exactly."""
    return to_document(store).model_dump_json(indent=2)


def loads(text: str) -> MemoryStore:
    try:
        document = MemoryDocument.model_validate_json(text)
    except ValidationError as e:
        fields = [".".join(str(p) for p in err["loc"]) for err in e.errors()]
        raise ConfigurationError("Invalid memory document", fields=fields) from e
    return from_document(document)


def save_memory(store: MemoryStore, path: Union[str, Path]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dumps(store))
    logger.info(f"Saved {len(store)} memory features to {target}")
    return target


def load_memory(path: Union[str, Path]) -> MemoryStore:
    return loads(Path(path).read_text())
