"""
Memory of topological features: insertion, consolidation, strength dynamics
and spatial queries.
"""
from .feature import MemoryFeature, merge
from .index import FeatureIndex
from .params import MEMORY_PRESETS, MemoryParams, memory_preset
from .persistence import MemoryDocument, dumps, load_memory, loads, save_memory
from .snapshot import MemorySnapshot
from .store import InsertOutcome, MemoryStore

__all__ = [
    "FeatureIndex",
    "InsertOutcome",
    "MEMORY_PRESETS",
    "MemoryDocument",
    "MemoryFeature",
    "MemoryParams",
    "MemorySnapshot",
    "MemoryStore",
    "dumps",
    "load_memory",
    "loads",
    "memory_preset",
    "merge",
    "save_memory",
]
