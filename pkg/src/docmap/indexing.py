"""Corpus ingestion, tokenization, tf-idf weighting, and local top-k search.

The index is immutable once built and safe to share across threads.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .models import Document, RankedResult, ResultEntry

TermVector = dict[str, float]

_TOKEN_RE = re.compile(r"[0-9a-z]+")


def _default_stopword_text() -> str:
    return resources.files("docmap.data").joinpath("stopwords.txt").read_text("utf-8")


def default_stopwords() -> frozenset[str]:
    """Stopword list shipped with the package (one lowercase word per line)."""
    return frozenset(_default_stopword_text().split())


def load_stopwords(path: str | Path) -> frozenset[str]:
    words = set()
    for line in Path(path).read_text("utf-8").splitlines():
        word = line.strip()
        if word:
            words.add(word.lower())
    return frozenset(words)


@dataclass(frozen=True)
class AnalysisConfig:
    """Tokenizer settings: stopword list and optional light stemming."""

    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    stemming: bool = False


def strip_suffix(word: str) -> str:
    """Light plural-stripping stemmer (the classic three-rule "s" remover)."""
    if word.endswith("ies") and not word.endswith(("eies", "aies")):
        return word[:-3] + "y"
    if word.endswith("es") and not word.endswith(("aes", "ees", "oes")):
        return word[:-1]
    if word.endswith("s") and not word.endswith(("us", "ss")):
        return word[:-1]
    return word


def tokenize(text: str, config: AnalysisConfig) -> list[str]:
    """Lowercase alphanumeric tokens, stopwords removed, optionally stemmed."""
    tokens = _TOKEN_RE.findall(text.lower())
    tokens = [t for t in tokens if t not in config.stopwords]
    if config.stemming:
        tokens = [strip_suffix(t) for t in tokens]
    return tokens


def term_weight(tf: int, df: int, n_docs: int) -> float:
    """tf-idf weight (1 + ln tf) * ln(N / df); zero for absent or ubiquitous terms."""
    if n_docs < 1:
        raise ValueError("term_weight: N must be >= 1")
    if df > n_docs:
        raise ValueError(f"term_weight: df={df} exceeds N={n_docs}")
    if tf == 0 or df == n_docs:
        return 0.0
    if df < 1:
        raise ValueError("term_weight: df=0 with tf>0 is inconsistent")
    return (1.0 + math.log(tf)) * math.log(n_docs / df)


def cosine_sim(u: TermVector, v: TermVector) -> float:
    """Cosine similarity of two sparse vectors; 0.0 when either is empty."""
    if not u or not v:
        return 0.0
    if len(v) < len(u):
        u, v = v, u
    dot = sum(weight * v[term] for term, weight in u.items() if term in v)
    if dot == 0.0:
        return 0.0
    norm_u = math.sqrt(sum(w * w for w in u.values()))
    norm_v = math.sqrt(sum(w * w for w in v.values()))
    return dot / (norm_u * norm_v)


@dataclass(frozen=True)
class InvertedIndex:
    """Postings plus precomputed tf-idf document vectors for a fixed corpus."""

    postings: dict[str, list[tuple[str, int]]]
    doc_count: int
    doc_vectors: dict[str, TermVector]
    documents: dict[str, Document]
    config: AnalysisConfig

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))


def analyzed_terms(doc: Document, config: AnalysisConfig) -> list[str]:
    """The token sequence a document is indexed under (title followed by body)."""
    return tokenize(doc.title + " " + doc.body, config)


def build_index(corpus: list[Document], config: AnalysisConfig | None = None) -> InvertedIndex:
    """Index a corpus; rejects duplicate document ids."""
    config = config or AnalysisConfig()
    documents: dict[str, Document] = {}
    for doc in corpus:
        if doc.id in documents:
            raise ValueError(f"duplicate document id {doc.id!r}")
        documents[doc.id] = doc

    counts: dict[str, dict[str, int]] = {}
    postings: dict[str, list[tuple[str, int]]] = {}
    for doc in corpus:
        tf: dict[str, int] = {}
        for term in analyzed_terms(doc, config):
            tf[term] = tf.get(term, 0) + 1
        counts[doc.id] = tf
        for term, count in tf.items():
            postings.setdefault(term, []).append((doc.id, count))

    n_docs = len(corpus)
    doc_vectors: dict[str, TermVector] = {}
    for doc in corpus:
        vector: TermVector = {}
        for term, tf in counts[doc.id].items():
            weight = term_weight(tf, len(postings[term]), n_docs)
            if weight > 0.0:
                vector[term] = weight
        doc_vectors[doc.id] = vector

    return InvertedIndex(
        postings=postings,
        doc_count=n_docs,
        doc_vectors=doc_vectors,
        documents=documents,
        config=config,
    )


def query_vector(index: InvertedIndex, query_terms: list[str]) -> TermVector:
    """tf-idf vector for a bag of query terms; terms unknown to the index drop out."""
    tf: dict[str, int] = {}
    for term in query_terms:
        tf[term] = tf.get(term, 0) + 1
    vector: TermVector = {}
    for term, count in tf.items():
        df = index.df(term)
        if df == 0:
            continue
        weight = term_weight(count, df, index.doc_count)
        if weight > 0.0:
            vector[term] = weight
    return vector


def local_search(index: InvertedIndex, query_terms: list[str], k: int) -> RankedResult:
    """Top-k documents by cosine similarity to the query vector.

    Zero-score documents are excluded; ties break by ascending doc id.
    """
    if k < 1:
        raise ValueError("local_search: k must be >= 1")
    qv = query_vector(index, query_terms)
    candidates: set[str] = set()
    for term in qv:
        candidates.update(doc_id for doc_id, _ in index.postings[term])

    scored = []
    for doc_id in sorted(candidates):
        score = cosine_sim(qv, index.doc_vectors[doc_id])
        if score > 0.0:
            scored.append((doc_id, score))
    scored.sort(key=lambda item: (-item[1], item[0]))

    entries = tuple(
        ResultEntry(document=index.documents[doc_id], score=score, original_rank=rank)
        for rank, (doc_id, score) in enumerate(scored[:k], start=1)
    )
    return RankedResult(query_id=" ".join(query_terms), entries=entries)


def load_corpus(path: str | Path) -> list[Document]:
    """Read a corpus file: one JSON object per line with id, title, body."""
    docs: list[Document] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                doc = Document(id=raw["id"], title=raw["title"], body=raw["body"])
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{line_no}: bad corpus record: {exc}") from exc
            docs.append(doc)
    return docs


def toy_corpus_path() -> Path:
    """Path of the bundled 30-document demo corpus."""
    return Path(str(resources.files("docmap.data").joinpath("toy_corpus.jsonl")))
