"""Session lifecycle and the per-search analysis pipeline.

Many sessions run concurrently; requests within one session are applied
strictly in arrival order (each session carries its own lock). The corpus
index and adapter registry are immutable shared state.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field

from .adapters import EngineRegistry
from .clustering import ClusterConfig, cluster_retrieved
from .errors import (
    AdapterFormatError,
    NoSearchYetError,
    NoSuchDocumentError,
    NoSuchSessionError,
    ServerBusyError,
)
from .indexing import AnalysisConfig, build_index, query_vector, tokenize
from .layers import LayerKind, LayerSpec, generate_layers, layer_raw_score, normalize_brightness
from .mapgrid import GridSpec, MapBundle, ScoredLayer, build_bundle
from .models import Document, RankedResult


@dataclass
class Session:
    session_id: str
    engine_id: str | None = None
    query_echo: str = ""
    bundle: MapBundle | None = None
    retrieved: dict[str, Document] = field(default_factory=dict)
    pressed: list[str] = field(default_factory=list)
    examined: set[str] = field(default_factory=set)
    created_at: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)


@dataclass(frozen=True)
class ExportedRun:
    """A session's document ordering: pressed first (in selection order),
    then the rest in original rank order."""

    query_id: str
    doc_ids: tuple[str, ...]

    def run_lines(self) -> list[str]:
        total = len(self.doc_ids)
        return [
            f"{self.query_id} {rank} {doc_id} {total - rank + 1}"
            for rank, doc_id in enumerate(self.doc_ids, start=1)
        ]

    def run_text(self) -> str:
        return "".join(line + "\n" for line in self.run_lines())


class PresentationService:
    """The intermediary between clients and retrieval engines."""

    def __init__(
        self,
        registry: EngineRegistry,
        grid: GridSpec | None = None,
        analysis: AnalysisConfig | None = None,
        clusters: ClusterConfig | None = None,
        session_cap: int = 64,
    ):
        if session_cap < 1:
            raise ValueError("session cap must be >= 1")
        self.registry = registry
        self.grid = grid or GridSpec()
        self.analysis = analysis or AnalysisConfig()
        self.clusters = clusters or ClusterConfig()
        self.session_cap = session_cap
        self._sessions: dict[str, Session] = {}
        self._table_lock = threading.Lock()

    # -- session table ----------------------------------------------------

    def open_session(self) -> str:
        with self._table_lock:
            if len(self._sessions) >= self.session_cap:
                raise ServerBusyError(
                    f"session cap {self.session_cap} reached, try again later"
                )
            token = secrets.token_hex(16)
            while token in self._sessions:
                token = secrets.token_hex(16)
            self._sessions[token] = Session(session_id=token)
            return token

    def close_session(self, session_id: str) -> None:
        with self._table_lock:
            if session_id not in self._sessions:
                raise NoSuchSessionError(f"unknown session {session_id!r}")
            del self._sessions[session_id]

    def _session(self, session_id: str) -> Session:
        with self._table_lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise NoSuchSessionError(f"unknown session {session_id!r}")
        return session

    def session_count(self) -> int:
        with self._table_lock:
            return len(self._sessions)

    # -- operations --------------------------------------------------------

    def handle_search(self, session_id: str, engine_id: str, query: str) -> MapBundle:
        session = self._session(session_id)
        with session.lock:
            bundle, retrieved = self._run_search(engine_id, query)
            session.engine_id = engine_id
            session.query_echo = query
            session.bundle = bundle
            session.retrieved = retrieved
            session.pressed = []  # new result set invalidates old cell state
            session.examined = set()
            return bundle

    def get_document(self, session_id: str, doc_id: str) -> Document:
        session = self._session(session_id)
        with session.lock:
            self._require_bundle(session)
            document = session.retrieved.get(doc_id)
            if document is None:
                raise NoSuchDocumentError(f"document {doc_id!r} is not in the current map")
            session.examined.add(doc_id)
            return document

    def toggle_press(self, session_id: str, doc_id: str) -> list[str]:
        session = self._session(session_id)
        with session.lock:
            self._require_bundle(session)
            if doc_id not in session.retrieved:
                raise NoSuchDocumentError(f"document {doc_id!r} is not in the current map")
            if doc_id in session.pressed:
                session.pressed.remove(doc_id)
            else:
                session.pressed.append(doc_id)
            return list(session.pressed)

    def export_session(self, session_id: str) -> ExportedRun:
        session = self._session(session_id)
        with session.lock:
            self._require_bundle(session)
            assert session.bundle is not None
            pressed = list(session.pressed)
            rest = [
                doc_id for doc_id, _, _ in session.bundle.documents if doc_id not in pressed
            ]
            terms = tokenize(session.query_echo, self.analysis)
            query_id = "-".join(terms) if terms else "query"
            return ExportedRun(query_id=query_id, doc_ids=tuple(pressed + rest))

    def examined_ids(self, session_id: str) -> set[str]:
        session = self._session(session_id)
        with session.lock:
            return set(session.examined)

    @staticmethod
    def _require_bundle(session: Session) -> None:
        if session.bundle is None:
            raise NoSearchYetError("no search has been run in this session")

    # -- search pipeline ---------------------------------------------------

    def _run_search(self, engine_id: str, query: str) -> tuple[MapBundle, dict[str, Document]]:
        query_terms = tokenize(query, self.analysis)
        query_layers = generate_layers(query_terms)  # raises empty-query first

        k = self.grid.capacity
        try:
            ranked = self.registry.execute_query(engine_id, query, k)
        except AdapterFormatError as exc:
            raise AdapterFormatError(f"engine {engine_id!r}: {exc.msg}") from exc
        retrieved_docs = list(ranked.documents)
        retrieved_ids = list(ranked.doc_ids())

        # The analysis index covers only the retrieved set: layer weights and
        # clusters describe this result, not the engine's whole collection.
        result_index = build_index(retrieved_docs, self.analysis)
        doc_vectors = result_index.doc_vectors
        qv = query_vector(result_index, query_terms)

        scored_query_layers = [
            ScoredLayer(spec=spec, brightness=self._layer_brightness(spec, retrieved_ids, doc_vectors, qv))
            for spec in query_layers
        ]

        scored_cluster_layers: list[ScoredLayer] = []
        if len(retrieved_docs) >= 2:
            clusters = cluster_retrieved(
                retrieved_docs, retrieved_ids, doc_vectors, self.clusters, self.analysis
            )
            taken = {layer.spec.label for layer in scored_query_layers}
            for cluster in clusters:
                label = self._unique_label(" ".join(cluster.label), taken)
                taken.add(label)
                spec = LayerSpec(layer_id=cluster.cluster_id, kind=LayerKind.CLUSTER, label=label)
                scored_cluster_layers.append(
                    ScoredLayer(spec=spec, brightness=cluster.membership, members=cluster.members)
                )

        bundle = build_bundle(
            ranked, scored_query_layers, scored_cluster_layers, self.grid, query_echo=query
        )
        return bundle, {doc.id: doc for doc in retrieved_docs}

    @staticmethod
    def _layer_brightness(spec, retrieved_ids, doc_vectors, qv) -> dict[str, float]:
        if not retrieved_ids:
            return {}
        raw = {
            doc_id: layer_raw_score(spec, doc_vectors[doc_id], qv) for doc_id in retrieved_ids
        }
        return normalize_brightness(raw)

    @staticmethod
    def _unique_label(label: str, taken: set[str]) -> str:
        if label not in taken:
            return label
        suffix = 2
        while f"{label} ({suffix})" in taken:
            suffix += 1
        return f"{label} ({suffix})"
