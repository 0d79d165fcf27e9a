"""Shared-phrase clustering of a retrieved document set.

Documents sharing a contiguous phrase (in analyzed-token space) form base
clusters; heavily overlapping base clusters merge into the final clusters,
each carrying a short label and graded membership brightness.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .indexing import AnalysisConfig, Document, TermVector, analyzed_terms, cosine_sim
from .layers import normalize_brightness

PHRASE_SCORE_CAP = 6  # phrase length beyond this adds nothing to a base score


@dataclass(frozen=True)
class ClusterConfig:
    max_phrase_len: int = 6
    top_bases: int = 30
    merge_threshold: float = 0.5
    tabs: int = 5

    CONFIG_KEYS = (
        "cluster.max_phrase_len",
        "cluster.top_bases",
        "cluster.merge_threshold",
        "cluster.tabs",
    )

    def __post_init__(self) -> None:
        if self.max_phrase_len < 1 or self.top_bases < 1 or self.tabs < 1:
            raise ValueError("cluster config values must be >= 1")
        if not 0.0 < self.merge_threshold <= 1.0:
            raise ValueError("cluster.merge_threshold must be in (0, 1]")

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, object]) -> "ClusterConfig":
        """Build from flat config keys (cluster.max_phrase_len, cluster.top_bases,
        cluster.merge_threshold, cluster.tabs); missing keys keep defaults."""
        base = cls()
        return cls(
            max_phrase_len=int(mapping.get("cluster.max_phrase_len", base.max_phrase_len)),
            top_bases=int(mapping.get("cluster.top_bases", base.top_bases)),
            merge_threshold=float(mapping.get("cluster.merge_threshold", base.merge_threshold)),
            tabs=int(mapping.get("cluster.tabs", base.tabs)),
        )


@dataclass(frozen=True)
class BaseCluster:
    """All documents sharing one maximal phrase, scored by size and phrase length."""

    phrase: tuple[str, ...]
    members: frozenset[str]
    score: float


@dataclass(frozen=True)
class Cluster:
    cluster_id: str
    members: frozenset[str]
    bases: tuple[BaseCluster, ...]
    score: float
    label: tuple[str, ...] = ()
    membership: dict[str, float] = field(default_factory=dict)


def score_base_cluster(members: int, phrase_len: int) -> float:
    """members * f(len): single-word phrases count half, length caps at 6."""
    if members < 2:
        raise ValueError("a base cluster has at least 2 members")
    if phrase_len < 1:
        raise ValueError("phrase length must be >= 1")
    factor = 0.5 if phrase_len == 1 else float(min(phrase_len, PHRASE_SCORE_CAP))
    return members * factor


def build_base_clusters(
    docs: Sequence[Document],
    config: ClusterConfig | None = None,
    analysis: AnalysisConfig | None = None,
) -> list[BaseCluster]:
    """One base cluster per maximal shared phrase.

    A phrase is kept only if no longer phrase containing it has the identical
    member set (extending it would then lose no documents). Sorted by score
    descending, phrase ascending.
    """
    if len(docs) < 2:
        raise ValueError("too-few-documents: clustering needs at least 2 documents")
    config = config or ClusterConfig()
    analysis = analysis or AnalysisConfig()

    phrase_members: dict[tuple[str, ...], set[str]] = {}
    for doc in docs:
        tokens = analyzed_terms(doc, analysis)
        seen: set[tuple[str, ...]] = set()
        for start in range(len(tokens)):
            limit = min(config.max_phrase_len, len(tokens) - start)
            for length in range(1, limit + 1):
                phrase = tuple(tokens[start : start + length])
                if phrase not in seen:
                    seen.add(phrase)
                    phrase_members.setdefault(phrase, set()).add(doc.id)

    shared = {
        phrase: frozenset(members)
        for phrase, members in phrase_members.items()
        if len(members) >= 2
    }

    # A phrase is non-maximal iff some one-step extension keeps its member set,
    # so marking both parents of every shared phrase suffices.
    subsumed: set[tuple[str, ...]] = set()
    for phrase, members in shared.items():
        if len(phrase) < 2:
            continue
        for parent in (phrase[:-1], phrase[1:]):
            if shared.get(parent) == members:
                subsumed.add(parent)

    bases = [
        BaseCluster(
            phrase=phrase,
            members=members,
            score=score_base_cluster(len(members), len(phrase)),
        )
        for phrase, members in shared.items()
        if phrase not in subsumed
    ]
    bases.sort(key=lambda base: (-base.score, base.phrase))
    return bases


def merge_base_clusters(
    bases: Sequence[BaseCluster],
    overlap_threshold: float = 0.5,
    top_bases: int = 30,
) -> list[Cluster]:
    """Connect base clusters whose member overlap exceeds the threshold both
    ways; connected components become clusters, ordered by summed base score.

    Only the top `top_bases` bases (by score, then phrase) enter merging, so
    the result is independent of the input ordering.
    """
    if not 0.0 < overlap_threshold <= 1.0:
        raise ValueError("overlap threshold must be in (0, 1]")
    ranked = sorted(bases, key=lambda base: (-base.score, base.phrase))[:top_bases]

    parent = list(range(len(ranked)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(ranked)):
        for j in range(i + 1, len(ranked)):
            common = len(ranked[i].members & ranked[j].members)
            if common == 0:
                continue
            if (
                common / len(ranked[i].members) > overlap_threshold
                and common / len(ranked[j].members) > overlap_threshold
            ):
                parent[find(i)] = find(j)

    groups: dict[int, list[BaseCluster]] = {}
    for i, base in enumerate(ranked):
        groups.setdefault(find(i), []).append(base)

    components = []
    for group in groups.values():
        members = frozenset().union(*(base.members for base in group))
        score = sum(base.score for base in group)
        components.append((score, group, members))
    components.sort(key=lambda item: (-item[0], item[1][0].phrase))

    return [
        Cluster(
            cluster_id=f"cluster-{index}",
            members=members,
            bases=tuple(group),
            score=score,
        )
        for index, (score, group, members) in enumerate(components, start=1)
    ]


def label_cluster(cluster: Cluster, doc_vectors: Mapping[str, TermVector]) -> tuple[str, ...]:
    """The (up to) two base-phrase words with highest summed tf-idf over members;
    ties break lexicographically."""
    if not cluster.members:
        raise ValueError("cannot label an empty cluster")
    candidates: list[str] = []
    for base in cluster.bases:
        for word in base.phrase:
            if word not in candidates:
                candidates.append(word)

    ordered_members = sorted(cluster.members)

    def weight(word: str) -> float:
        return sum(doc_vectors[doc_id].get(word, 0.0) for doc_id in ordered_members)

    candidates.sort(key=lambda word: (-weight(word), word))
    return tuple(candidates[:2])


def member_centroid(cluster: Cluster, doc_vectors: Mapping[str, TermVector]) -> TermVector:
    """Mean tf-idf vector of the cluster's member documents."""
    if not cluster.members:
        raise ValueError("cannot take the centroid of an empty cluster")
    total: TermVector = {}
    for doc_id in sorted(cluster.members):
        for term, value in doc_vectors[doc_id].items():
            total[term] = total.get(term, 0.0) + value
    size = len(cluster.members)
    return {term: value / size for term, value in total.items()}


def membership_raw(
    cluster: Cluster,
    retrieved_ids: Sequence[str],
    doc_vectors: Mapping[str, TermVector],
) -> dict[str, float]:
    """Centroid cosine for every retrieved document (members and non-members)."""
    centroid = member_centroid(cluster, doc_vectors)
    return {doc_id: cosine_sim(doc_vectors[doc_id], centroid) for doc_id in retrieved_ids}


def membership_scores(
    cluster: Cluster,
    retrieved_ids: Sequence[str],
    doc_vectors: Mapping[str, TermVector],
) -> dict[str, float]:
    """Membership brightness in [0, 1] over the whole retrieved set."""
    if not retrieved_ids:
        return {}
    return normalize_brightness(membership_raw(cluster, retrieved_ids, doc_vectors))


def cluster_retrieved(
    docs: Sequence[Document],
    retrieved_ids: Sequence[str],
    doc_vectors: Mapping[str, TermVector],
    config: ClusterConfig | None = None,
    analysis: AnalysisConfig | None = None,
) -> list[Cluster]:
    """Full pipeline: base clusters, merge, keep the top `tabs` clusters,
    then attach labels and membership brightness."""
    config = config or ClusterConfig()
    bases = build_base_clusters(docs, config, analysis)
    clusters = merge_base_clusters(bases, config.merge_threshold, config.top_bases)
    finished = []
    for cluster in clusters[: config.tabs]:
        finished.append(
            dataclasses.replace(
                cluster,
                label=label_cluster(cluster, doc_vectors),
                membership=membership_scores(cluster, retrieved_ids, doc_vectors),
            )
        )
    return finished
