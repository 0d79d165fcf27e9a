"""Per-tab query views: the full-query vector layer, a graded AND layer,
and one layer per query term, each with min-max normalized brightness."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import EmptyQueryError
from .indexing import TermVector, cosine_sim


class LayerKind(str, enum.Enum):
    VECTOR = "vector"
    CONJUNCTION = "conjunction"
    TERM = "term"
    CLUSTER = "cluster"


@dataclass(frozen=True)
class LayerSpec:
    layer_id: str
    kind: LayerKind
    label: str
    terms: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind is LayerKind.TERM and len(self.terms) != 1:
            raise ValueError(f"term layer {self.layer_id!r} needs exactly one term")
        if self.kind is LayerKind.CONJUNCTION and len(self.terms) < 2:
            raise ValueError(f"conjunction layer {self.layer_id!r} needs >= 2 terms")
        if self.kind is LayerKind.CLUSTER and self.terms:
            raise ValueError(f"cluster layer {self.layer_id!r} carries no terms")


def generate_layers(query_terms: list[str]) -> list[LayerSpec]:
    """Layer set for a query: vector, conjunction (n >= 2 only), then one per term.

    Duplicate query terms collapse; first-occurrence order is kept.
    """
    distinct: list[str] = []
    for term in query_terms:
        if term not in distinct:
            distinct.append(term)
    if not distinct:
        raise EmptyQueryError("no query terms remain after analysis")

    layers = [
        LayerSpec(
            layer_id="vector",
            kind=LayerKind.VECTOR,
            label="(" + " ".join(distinct) + ")",
            terms=tuple(distinct),
        )
    ]
    if len(distinct) >= 2:
        layers.append(
            LayerSpec(
                layer_id="conjunction",
                kind=LayerKind.CONJUNCTION,
                label=" AND ".join(distinct),
                terms=tuple(distinct),
            )
        )
    for term in distinct:
        layers.append(
            LayerSpec(layer_id=f"term-{term}", kind=LayerKind.TERM, label=term, terms=(term,))
        )
    return layers


def layer_raw_score(layer: LayerSpec, doc_vector: TermVector, query_vector: TermVector) -> float:
    """Raw support of one document for one query layer.

    vector: cosine to the query vector. term: the document's weight for that
    term. conjunction: min weight over all terms (graded AND, 0 if any absent).
    """
    if layer.kind is LayerKind.VECTOR:
        return cosine_sim(query_vector, doc_vector)
    if layer.kind is LayerKind.TERM:
        return doc_vector.get(layer.terms[0], 0.0)
    if layer.kind is LayerKind.CONJUNCTION:
        return min(doc_vector.get(term, 0.0) for term in layer.terms)
    raise ValueError(f"layer {layer.layer_id!r}: cluster layers are scored by clustering")


def normalize_brightness(raw: dict[str, float]) -> dict[str, float]:
    """Min-max map onto [0, 1]; a flat layer reads as all fully supported."""
    if not raw:
        raise ValueError("normalize_brightness: empty score map")
    low = min(raw.values())
    high = max(raw.values())
    if high == low:
        return {doc_id: 1.0 for doc_id in raw}
    span = high - low
    return {doc_id: (value - low) / span for doc_id, value in raw.items()}
