"""Placement of ranked documents on the fixed grid and bundle assembly.

Cell position p (row-major) names the same document in every layer, so
switching tabs never moves a document.
"""

from __future__ import annotations

from dataclasses import dataclass

from .layers import LayerKind, LayerSpec
from .models import RankedResult


@dataclass(frozen=True)
class GridSpec:
    rows: int = 10
    cols: int = 10

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid needs at least one row and one column")

    @property
    def capacity(self) -> int:
        return self.rows * self.cols

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse "RxC" (e.g. "10x10")."""
        try:
            rows_text, cols_text = text.lower().split("x")
            return cls(rows=int(rows_text), cols=int(cols_text))
        except (ValueError, AttributeError) as exc:
            raise ValueError(f"bad grid spec {text!r}, expected RxC") from exc


@dataclass(frozen=True)
class ScoredLayer:
    """A layer spec plus its per-document brightness (and members for clusters)."""

    spec: LayerSpec
    brightness: dict[str, float]
    members: frozenset[str] | None = None


@dataclass(frozen=True)
class BundleLayer:
    spec: LayerSpec
    hue: float  # degrees in [0, 360), unique per layer
    brightness: tuple[float, ...]  # grid (rank) order
    members: tuple[str, ...] | None = None  # cluster layers only, sorted


@dataclass(frozen=True)
class MapBundle:
    grid: GridSpec
    documents: tuple[tuple[str, str, int], ...]  # (doc id, title, original rank)
    layers: tuple[BundleLayer, ...]
    query_echo: str


def assign_grid(ranked: RankedResult, grid: GridSpec) -> dict[int, tuple[int, int]]:
    """Row-major placement by original rank: rank r sits at ((r-1) div C, (r-1) mod C)."""
    if len(ranked) > grid.capacity:
        raise ValueError(
            f"{len(ranked)} documents exceed grid capacity {grid.capacity}"
        )
    return {
        entry.original_rank: (
            (entry.original_rank - 1) // grid.cols,
            (entry.original_rank - 1) % grid.cols,
        )
        for entry in ranked.entries
    }


def build_bundle(
    ranked: RankedResult,
    query_layers: list[ScoredLayer],
    cluster_layers: list[ScoredLayer],
    grid: GridSpec,
    query_echo: str = "",
) -> MapBundle:
    """Assemble one bundle: query layers first, then clusters, hues evenly spaced.

    Every layer's brightness map must cover exactly the ranked document ids.
    """
    assign_grid(ranked, grid)  # validates capacity
    doc_ids = ranked.doc_ids()
    id_set = set(doc_ids)

    ordered = list(query_layers) + list(cluster_layers)
    labels: set[str] = set()
    for layer in ordered:
        if set(layer.brightness) != id_set:
            raise ValueError(
                f"inconsistent layer {layer.spec.layer_id!r}: brightness map does not "
                "cover exactly the ranked documents"
            )
        if layer.spec.label in labels:
            raise ValueError(f"duplicate layer label {layer.spec.label!r}")
        labels.add(layer.spec.label)

    total = len(ordered)
    bundle_layers = tuple(
        BundleLayer(
            spec=layer.spec,
            hue=360.0 * index / total,
            brightness=tuple(layer.brightness[doc_id] for doc_id in doc_ids),
            members=tuple(sorted(layer.members)) if layer.members is not None else None,
        )
        for index, layer in enumerate(ordered)
    )

    documents = tuple(
        (entry.document.id, entry.document.title, entry.original_rank)
        for entry in ranked.entries
    )
    return MapBundle(grid=grid, documents=documents, layers=bundle_layers, query_echo=query_echo)


def bundle_to_wire(bundle: MapBundle) -> dict:
    """Bundle as sent over the protocol (cluster layers also list their members)."""
    layers = []
    for layer in bundle.layers:
        wire: dict = {
            "id": layer.spec.layer_id,
            "kind": layer.spec.kind.value,
            "label": layer.spec.label,
            "hue": layer.hue,
            "brightness": list(layer.brightness),
        }
        if layer.spec.kind is LayerKind.CLUSTER and layer.members is not None:
            wire["members"] = list(layer.members)
        layers.append(wire)
    return {
        "grid": {"rows": bundle.grid.rows, "cols": bundle.grid.cols},
        "query": bundle.query_echo,
        "documents": [
            {"id": doc_id, "title": title, "rank": rank}
            for doc_id, title, rank in bundle.documents
        ],
        "layers": layers,
    }
