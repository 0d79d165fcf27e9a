"""docmap: a presentation server that re-analyzes retrieval results into
layered document-map bundles, plus a retrieval evaluation toolkit."""

from .adapters import EngineDescriptor, EngineKind, EngineRegistry, LocalEngineAdapter, ReplayFileAdapter
from .clustering import ClusterConfig
from .errors import ServiceError
from .indexing import AnalysisConfig, InvertedIndex, build_index, load_corpus, local_search, tokenize
from .mapgrid import GridSpec, MapBundle, bundle_to_wire
from .models import Document, RankedResult, ResultEntry
from .service import PresentationService

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "ClusterConfig",
    "Document",
    "EngineDescriptor",
    "EngineKind",
    "EngineRegistry",
    "GridSpec",
    "InvertedIndex",
    "LocalEngineAdapter",
    "MapBundle",
    "PresentationService",
    "RankedResult",
    "ReplayFileAdapter",
    "ResultEntry",
    "ServiceError",
    "build_index",
    "bundle_to_wire",
    "load_corpus",
    "local_search",
    "tokenize",
    "__version__",
]
