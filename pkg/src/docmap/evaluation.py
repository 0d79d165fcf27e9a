"""Retrieval-evaluation toolkit: interpolated precision over 11 recall
levels, precision at fixed cutoffs, rank-based normalized recall, and the
two-run comparison report built from them.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

log = logging.getLogger(__name__)

RECALL_LEVELS = tuple(i / 10 for i in range(11))
DEFAULT_CUTOFFS = (5, 10, 20, 30)

Qrels = Mapping[str, frozenset[str]]  # query id -> relevant doc ids
Run = Mapping[str, Sequence[str]]  # query id -> doc ids in rank order


def round_half_away(value: float) -> int:
    """Round to the nearest integer, halves away from zero."""
    if value >= 0:
        return math.floor(value + 0.5)
    return math.ceil(value - 0.5)


def round4(value: float) -> float:
    return round_half_away(value * 10000) / 10000


def percent_increase(a: float, b: float) -> int | None:
    """Whole-percent change from a to b; undefined (None) when a is zero."""
    if a == 0:
        return None
    return round_half_away(100.0 * (b - a) / a)


# -- per-query measures ----------------------------------------------------


def relevant_in_prefix(ranked_ids: Sequence[str], relevant: frozenset[str], k: int) -> int:
    return sum(1 for doc_id in ranked_ids[:k] if doc_id in relevant)


def precision_at_cutoff(ranked_ids: Sequence[str], relevant: frozenset[str], k: int) -> float:
    """Relevant documents among the first min(k, n) entries, divided by k."""
    if k < 1:
        raise ValueError("cutoff must be >= 1")
    return relevant_in_prefix(ranked_ids, relevant, k) / k


def interpolated_precision_11pt(
    ranked_ids: Sequence[str], relevant: frozenset[str]
) -> list[float]:
    """P(r) = max precision at any rank whose recall reaches r, for r in
    0.0, 0.1, ..., 1.0. Recall levels the list never reaches score 0."""
    total_relevant = len(relevant)
    if total_relevant == 0:
        raise ValueError("undefined-query: no relevant documents")

    n = len(ranked_ids)
    precision = [0.0] * (n + 1)
    recall = [0.0] * (n + 1)
    found = 0
    for rank, doc_id in enumerate(ranked_ids, start=1):
        if doc_id in relevant:
            found += 1
        precision[rank] = found / rank
        recall[rank] = found / total_relevant

    # max precision over the suffix of ranks at or past each recall level
    suffix_max = [0.0] * (n + 2)
    for rank in range(n, 0, -1):
        suffix_max[rank] = max(precision[rank], suffix_max[rank + 1])

    out = []
    for level in RECALL_LEVELS:
        first_rank = next((r for r in range(1, n + 1) if recall[r] >= level), None)
        out.append(suffix_max[first_rank] if first_rank is not None else 0.0)
    return out


def normalized_recall(
    ranked_ids: Sequence[str],
    relevant: frozenset[str],
    n_total: int | None = None,
) -> float:
    """Rank-sum form of the area between the actual and ideal recall curves:
    1 - (sum of relevant ranks - sum 1..R) / (R * (N - R))."""
    n = len(ranked_ids) if n_total is None else n_total
    if n < len(ranked_ids):
        raise ValueError("n_total smaller than the ranked list")
    ranks = [rank for rank, doc_id in enumerate(ranked_ids, start=1) if doc_id in relevant]
    r = len(ranks)
    if r == 0 or r == n:
        raise ValueError("undefined-query: normalized recall needs 1 <= R < N")
    ideal = r * (r + 1) / 2
    return 1.0 - (sum(ranks) - ideal) / (r * (n - r))


# -- two-run comparison ----------------------------------------------------


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    a: float
    b: float
    pct: int | None


@dataclass(frozen=True)
class ComparisonReport:
    levels: tuple[ComparisonRow, ...]  # one row per recall level
    average: ComparisonRow  # 4-decimal column means, mean of unrounded pcts
    cutoffs: tuple[ComparisonRow, ...]
    norm_recall: ComparisonRow | None
    queries: tuple[str, ...]
    warnings: tuple[str, ...]


def recall_level_table(
    mean_a: Sequence[float], mean_b: Sequence[float]
) -> tuple[tuple[ComparisonRow, ...], ComparisonRow]:
    """Percent arithmetic over two 11-point precision columns.

    The Average row shows each column's mean to 4 decimals and the rounded
    mean of the per-level (unrounded) percent increases.
    """
    if len(mean_a) != len(RECALL_LEVELS) or len(mean_b) != len(RECALL_LEVELS):
        raise ValueError(f"expected {len(RECALL_LEVELS)} precision values per column")
    rows = tuple(
        ComparisonRow(f"{level:.1f}", a, b, percent_increase(a, b))
        for level, a, b in zip(RECALL_LEVELS, mean_a, mean_b)
    )
    raw_pcts = [100.0 * (b - a) / a for a, b in zip(mean_a, mean_b) if a != 0]
    average = ComparisonRow(
        "Average",
        round4(sum(mean_a) / len(mean_a)),
        round4(sum(mean_b) / len(mean_b)),
        round_half_away(sum(raw_pcts) / len(raw_pcts)) if raw_pcts else None,
    )
    return rows, average


def _mean_columns(vectors: Iterable[Sequence[float]]) -> list[float]:
    rows = list(vectors)
    return [sum(vector[i] for vector in rows) / len(rows) for i in range(len(rows[0]))]


def comparison_report(
    run_a: Run,
    run_b: Run,
    qrels: Qrels,
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
) -> ComparisonReport:
    """Compare two runs over their shared queries (skipping unjudged ones)."""
    warnings: list[str] = []

    shared = sorted(set(run_a) & set(run_b))
    only_a = sorted(set(run_a) - set(run_b))
    only_b = sorted(set(run_b) - set(run_a))
    if only_a or only_b:
        warnings.append(
            f"query sets differ, comparing the {len(shared)} shared queries "
            f"(only in run A: {only_a}, only in run B: {only_b})"
        )

    queries = []
    for query_id in shared:
        relevant = qrels.get(query_id)
        if not relevant:
            warnings.append(f"query {query_id!r}: no relevant documents judged, skipped")
            continue
        queries.append(query_id)
    if not queries:
        raise ValueError("no evaluable queries (empty run overlap or no judgments)")
    for message in warnings:
        log.warning(message)

    mean_a = _mean_columns(interpolated_precision_11pt(run_a[q], qrels[q]) for q in queries)
    mean_b = _mean_columns(interpolated_precision_11pt(run_b[q], qrels[q]) for q in queries)
    levels, average = recall_level_table(mean_a, mean_b)

    cutoff_rows = []
    for k in cutoffs:
        # one integer ratio per column keeps simple decimal means exact
        total_a = sum(relevant_in_prefix(run_a[q], qrels[q], k) for q in queries)
        total_b = sum(relevant_in_prefix(run_b[q], qrels[q], k) for q in queries)
        a = float(Fraction(total_a, len(queries) * k))
        b = float(Fraction(total_b, len(queries) * k))
        cutoff_rows.append(ComparisonRow(f"P@{k}", a, b, percent_increase(a, b)))

    nr_pairs = []
    for query_id in queries:
        try:
            pair = (
                normalized_recall(run_a[query_id], qrels[query_id]),
                normalized_recall(run_b[query_id], qrels[query_id]),
            )
        except ValueError:
            warnings.append(
                f"query {query_id!r}: normalized recall undefined (R=0 or R=N), skipped"
            )
            log.warning(warnings[-1])
            continue
        nr_pairs.append(pair)
    norm_row = None
    if nr_pairs:
        nr_a = sum(pair[0] for pair in nr_pairs) / len(nr_pairs)
        nr_b = sum(pair[1] for pair in nr_pairs) / len(nr_pairs)
        norm_row = ComparisonRow("R_norm", nr_a, nr_b, percent_increase(nr_a, nr_b))

    return ComparisonReport(
        levels=levels,
        average=average,
        cutoffs=tuple(cutoff_rows),
        norm_recall=norm_row,
        queries=tuple(queries),
        warnings=tuple(warnings),
    )


# -- file formats ----------------------------------------------------------


def load_qrels(path: str | Path) -> dict[str, frozenset[str]]:
    """Read whitespace-separated `query_id doc_id rel` lines (rel 0 or 1)."""
    relevant: dict[str, set[str]] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 3 or parts[2] not in ("0", "1"):
                raise ValueError(f"{path}:{line_no}: expected 'query_id doc_id rel(0|1)'")
            query_id, doc_id, rel = parts
            relevant.setdefault(query_id, set())
            if rel == "1":
                relevant[query_id].add(doc_id)
    return {query_id: frozenset(ids) for query_id, ids in relevant.items()}


def load_run(path: str | Path) -> dict[str, tuple[str, ...]]:
    """Read whitespace-separated `query_id rank doc_id score` lines."""
    by_query: dict[str, list[tuple[int, str]]] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 4:
                raise ValueError(f"{path}:{line_no}: expected 'query_id rank doc_id score'")
            query_id, rank_text, doc_id, score_text = parts
            try:
                rank = int(rank_text)
                float(score_text)
            except ValueError as exc:
                raise ValueError(f"{path}:{line_no}: {exc}") from exc
            by_query.setdefault(query_id, []).append((rank, doc_id))

    runs: dict[str, tuple[str, ...]] = {}
    for query_id, pairs in by_query.items():
        pairs.sort()
        doc_ids = tuple(doc_id for _, doc_id in pairs)
        if len(set(doc_ids)) != len(doc_ids):
            raise ValueError(f"{path}: duplicate document in query {query_id!r}")
        runs[query_id] = doc_ids
    return runs
