"""Core result types shared by the indexing and adapter layers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Document:
    """One retrievable item: unique id, short title, full body text."""

    id: str
    title: str
    body: str

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("document id must be non-empty")
        if not self.title:
            raise ValueError(f"document {self.id!r}: title must be non-empty")


@dataclass(frozen=True)
class ResultEntry:
    document: Document
    score: float
    original_rank: int  # 1-based position assigned by the engine


@dataclass(frozen=True)
class RankedResult:
    """Engine output normalized to a common shape.

    Entries are ordered by original_rank; ranks are exactly 1..n and
    document ids are distinct.
    """

    query_id: str
    entries: tuple[ResultEntry, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for position, entry in enumerate(self.entries, start=1):
            if entry.original_rank != position:
                raise ValueError(
                    f"entry {entry.document.id!r}: original_rank "
                    f"{entry.original_rank} != position {position}"
                )
            if entry.score < 0:
                raise ValueError(f"entry {entry.document.id!r}: negative score")
            if entry.document.id in seen:
                raise ValueError(f"duplicate document id {entry.document.id!r}")
            seen.add(entry.document.id)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def documents(self) -> tuple[Document, ...]:
        return tuple(entry.document for entry in self.entries)

    def doc_ids(self) -> tuple[str, ...]:
        return tuple(entry.document.id for entry in self.entries)
