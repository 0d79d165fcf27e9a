"""Adapters normalize heterogeneous retrieval engines to one result shape.

Two kinds ship: a local tf-idf engine over an in-process index, and a replay
engine that serves canned results from disk through the same normalization
path a remote engine would use.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import AdapterFormatError, NoSuchEngineError
from .indexing import AnalysisConfig, InvertedIndex, local_search, tokenize
from .models import Document, RankedResult, ResultEntry


class EngineKind(str, enum.Enum):
    LOCAL = "local"
    REPLAY = "replay"


@dataclass(frozen=True)
class EngineDescriptor:
    engine_id: str
    display_name: str
    kind: EngineKind


class Adapter:
    """One retrieval engine behind the uniform execute interface."""

    descriptor: EngineDescriptor

    def run(self, query: str, k: int) -> RankedResult:
        raise NotImplementedError


class LocalEngineAdapter(Adapter):
    """Top-k search over the in-process index."""

    def __init__(self, engine_id: str, display_name: str, index: InvertedIndex):
        self.descriptor = EngineDescriptor(engine_id, display_name, EngineKind.LOCAL)
        self._index = index

    def run(self, query: str, k: int) -> RankedResult:
        terms = tokenize(query, self._index.config)
        return local_search(self._index, terms, k)


_REPLAY_FIELDS = ("rank", "score", "id", "title", "body")


class ReplayFileAdapter(Adapter):
    """Serves a canned result file: one JSON object per line with rank, score,
    id, title, body. File order is the result order; entries must carry the
    full body so downstream analysis has complete text."""

    def __init__(self, engine_id: str, display_name: str, path: str | Path):
        self.descriptor = EngineDescriptor(engine_id, display_name, EngineKind.REPLAY)
        self.path = Path(path)

    def run(self, query: str, k: int) -> RankedResult:
        entries: list[ResultEntry] = []
        seen: set[str] = set()
        try:
            lines = self.path.read_text("utf-8").splitlines()
        except OSError as exc:
            raise AdapterFormatError(f"{self.path}: cannot read replay file: {exc}") from exc

        position = 0
        for line_no, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            position += 1
            record = self._parse_line(line, line_no, position, seen)
            if record is not None and position <= k:
                entries.append(record)
        return RankedResult(query_id=query, entries=tuple(entries))

    def _parse_line(
        self, line: str, line_no: int, position: int, seen: set[str]
    ) -> ResultEntry | None:
        where = f"{self.path}:{line_no}"
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise AdapterFormatError(f"{where}: invalid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise AdapterFormatError(f"{where}: expected a JSON object")
        missing = [name for name in _REPLAY_FIELDS if name not in raw]
        if missing:
            raise AdapterFormatError(f"{where}: missing field(s) {', '.join(missing)}")
        if not isinstance(raw["body"], str) or not raw["body"]:
            raise AdapterFormatError(f"{where}: entry has no full body text")
        if raw["rank"] != position:
            raise AdapterFormatError(
                f"{where}: rank {raw['rank']!r} does not match file position {position}"
            )
        try:
            score = float(raw["score"])
            document = Document(id=str(raw["id"]), title=str(raw["title"]), body=raw["body"])
        except (TypeError, ValueError) as exc:
            raise AdapterFormatError(f"{where}: {exc}") from exc
        if score < 0:
            raise AdapterFormatError(f"{where}: negative score")
        if document.id in seen:
            raise AdapterFormatError(f"{where}: duplicate document id {document.id!r}")
        seen.add(document.id)
        return ResultEntry(document=document, score=score, original_rank=position)


class EngineRegistry:
    """Configured adapters in stable (configuration) order."""

    def __init__(self, adapters: list[Adapter] | None = None):
        self._adapters: dict[str, Adapter] = {}
        for adapter in adapters or []:
            self.register(adapter)

    def register(self, adapter: Adapter) -> None:
        engine_id = adapter.descriptor.engine_id
        if engine_id in self._adapters:
            raise ValueError(f"duplicate engine id {engine_id!r}")
        self._adapters[engine_id] = adapter

    def list_engines(self) -> list[EngineDescriptor]:
        return [adapter.descriptor for adapter in self._adapters.values()]

    def execute_query(self, engine_id: str, query: str, k: int) -> RankedResult:
        if k < 1:
            raise ValueError("execute_query: k must be >= 1")
        adapter = self._adapters.get(engine_id)
        if adapter is None:
            raise NoSuchEngineError(f"no engine configured with id {engine_id!r}")
        return adapter.run(query, k)


def list_engines(registry: EngineRegistry) -> list[EngineDescriptor]:
    return registry.list_engines()


def execute_query(registry: EngineRegistry, engine_id: str, query: str, k: int) -> RankedResult:
    return registry.execute_query(engine_id, query, k)
