"""Venue corpus indexing and retrieval.

A corpus entry is a prior submission (title, abstract, reviews). Entries are
embedded from "title. abstract", retrieval is an exact cosine-similarity scan
(sufficient at N up to ~10^4), and the retrieved papers' reviews are distilled
into short guidance statements for prompt assembly.
"""

from __future__ import annotations

import base64
import json
import logging
import math
import zlib
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .embedding import Embedder, EmbedderFailure, EmptyText, tokenize
from .errors import ReviewForgeError
from .ingest.extract import split_sentences
from .ingest.summarize import Summarizer

logger = logging.getLogger(__name__)

DEFAULT_TOP_K = 2
MAX_ASPECTS = 8
INDEX_SCHEMA_VERSION = 1


class DuplicateId(ReviewForgeError):
    """Two corpus entries share an id."""


class DimensionMismatch(ReviewForgeError):
    """Query vector dimension differs from the index dimension."""


class EmbedderMismatch(ReviewForgeError):
    """Query was embedded with a different embedder than the index."""


class IndexFormatError(ReviewForgeError):
    """Persisted index file is unreadable or has the wrong schema."""


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    title: str
    abstract: str
    venue: str = ""
    year: int = 0
    reviews: tuple[str, ...] = ()

    def query_text(self) -> str:
        return f"{self.title}. {self.abstract}"


@dataclass(frozen=True)
class EmbeddingVector:
    values: np.ndarray
    fingerprint: str

    @property
    def dimension(self) -> int:
        return int(self.values.shape[0])


@dataclass
class CorpusIndex:
    entries: list[CorpusEntry]
    vectors: np.ndarray  # shape (N, dimension), unit-norm rows
    fingerprint: str

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def dimension(self) -> int:
        return int(self.vectors.shape[1])


@dataclass(frozen=True)
class RetrievalResult:
    entry: CorpusEntry
    similarity: float
    rank: int


@dataclass
class ReviewGuidance:
    aspects: list[str] = field(default_factory=list)
    source_ids: list[str] = field(default_factory=list)


def embed(text: str, embedder: Embedder) -> EmbeddingVector:
    """Embed text to a unit-norm vector stamped with the embedder fingerprint."""
    if not text or not text.strip():
        raise EmptyText("cannot embed empty text")
    try:
        values = np.asarray(embedder.embed(text), dtype=np.float64)
    except EmbedderFailure:
        raise
    except Exception as exc:
        raise EmbedderFailure(f"embedder failed: {exc}") from exc
    norm = float(np.linalg.norm(values))
    if not math.isclose(norm, 1.0, abs_tol=1e-6):
        if norm == 0.0:
            raise EmbedderFailure("embedder returned a zero vector")
        values = values / norm
    return EmbeddingVector(values=values, fingerprint=embedder.fingerprint)


def index_corpus(entries: Sequence[CorpusEntry], embedder: Embedder) -> CorpusIndex:
    """Embed all entries from "title. abstract" into one exhaustive-scan index."""
    if not entries:
        raise ValueError("cannot index an empty corpus")
    seen: set[str] = set()
    for entry in entries:
        if entry.id in seen:
            raise DuplicateId(f"duplicate corpus entry id {entry.id!r}")
        seen.add(entry.id)
    vectors = np.zeros((len(entries), embedder.dimension), dtype=np.float64)
    for i, entry in enumerate(entries):
        try:
            vectors[i] = embed(entry.query_text(), embedder).values
        except (EmbedderFailure, EmptyText) as exc:
            raise EmbedderFailure(
                f"failed to embed entry {entry.id!r}: {exc}", item_id=entry.id
            ) from exc
    return CorpusIndex(entries=list(entries), vectors=vectors, fingerprint=embedder.fingerprint)


def retrieve_top_k(
    query: EmbeddingVector, index: CorpusIndex, k: int = DEFAULT_TOP_K
) -> list[RetrievalResult]:
    """The k most cosine-similar entries; ties break to the lower corpus position.

    Returns all N entries when k exceeds the corpus size.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if query.dimension != index.dimension:
        raise DimensionMismatch(
            f"query dimension {query.dimension} != index dimension {index.dimension}"
        )
    if query.fingerprint != index.fingerprint:
        raise EmbedderMismatch(
            f"query embedder {query.fingerprint!r} != index embedder {index.fingerprint!r}"
        )
    # Per-row dot products, not one matmul: BLAS gemv reorders the reduction,
    # which can flip exact similarity ties by one ulp against a plain scan.
    sims = [float(np.dot(index.vectors[i], query.values)) for i in range(index.size)]
    order = sorted(range(index.size), key=lambda i: (-sims[i], i))[:k]
    return [
        RetrievalResult(
            entry=index.entries[i],
            similarity=float(np.clip(sims[i], -1.0, 1.0)),
            rank=rank,
        )
        for rank, i in enumerate(order, start=1)
    ]


def summarize_review_practices(
    results: Sequence[RetrievalResult],
    summarizer: Summarizer | None = None,
    max_aspects: int = MAX_ASPECTS,
) -> ReviewGuidance:
    """Distill the retrieved papers' reviews into short guidance statements.

    Without a summarizer this ranks the pooled review sentences by mean
    tf-idf and keeps the top ones (document order breaks ties), which is
    deterministic and model-free.
    """
    if not results:
        raise ValueError("results must be non-empty")
    source_ids = [r.entry.id for r in results]
    pool: list[str] = []
    for result in results:
        for review in result.entry.reviews:
            pool.extend(split_sentences(review))
    if not pool:
        return ReviewGuidance(aspects=[], source_ids=source_ids)

    if summarizer is not None:
        summary = summarizer.summarize(pool)
        aspects = [ln.strip("- ").strip() for ln in summary.splitlines() if ln.strip()]
        if len(aspects) <= 1:
            aspects = split_sentences(summary)
        return ReviewGuidance(aspects=aspects[:max_aspects], source_ids=source_ids)

    df: Counter = Counter()
    token_lists = [tokenize(s) for s in pool]
    for tokens in token_lists:
        df.update(set(tokens))
    n = len(pool)

    def idf(token: str) -> float:
        return math.log((1 + n) / (1 + df[token])) + 1.0

    scores = []
    for i, tokens in enumerate(token_lists):
        if not tokens:
            scores.append((0.0, i))
            continue
        tf = Counter(tokens)
        score = sum(c * idf(t) for t, c in tf.items()) / len(tokens)
        scores.append((score, i))
    ranked = sorted(scores, key=lambda pair: (-pair[0], pair[1]))[:max_aspects]
    aspects = [pool[i] for _, i in sorted(ranked, key=lambda pair: pair[1])]
    return ReviewGuidance(aspects=aspects, source_ids=source_ids)


# ---------------------------------------------------------------------------
# Persistence


def load_corpus_file(path: str | Path) -> tuple[list[CorpusEntry], list[str]]:
    """Read a JSON Lines corpus file; see parse_corpus_lines."""
    return parse_corpus_lines(Path(path).read_text(encoding="utf-8"))


def parse_corpus_lines(text_or_lines: str | Sequence[str]) -> tuple[list[CorpusEntry], list[str]]:
    """Parse JSON Lines corpus content; returns (entries, per-line error messages).

    Bad lines are reported, not fatal; duplicate ids are reported and skipped.
    """
    if isinstance(text_or_lines, str):
        lines = text_or_lines.splitlines()
    else:
        lines = list(text_or_lines)

    entries: list[CorpusEntry] = []
    errors: list[str] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            errors.append(f"line {lineno}: invalid JSON ({exc.msg})")
            continue
        try:
            entry = _entry_from_dict(raw)
        except (KeyError, TypeError, ValueError) as exc:
            errors.append(f"line {lineno}: {exc}")
            continue
        if entry.id in seen:
            errors.append(f"line {lineno}: duplicate id {entry.id!r}")
            continue
        seen.add(entry.id)
        entries.append(entry)
    return entries, errors


def _entry_from_dict(raw: dict) -> CorpusEntry:
    if not isinstance(raw, dict):
        raise ValueError("record is not a JSON object")
    for key in ("id", "title", "abstract"):
        value = raw.get(key)
        if not isinstance(value, str) or not value.strip():
            raise ValueError(f"field {key!r} missing or empty")
    reviews = raw.get("reviews", [])
    if not isinstance(reviews, list) or any(not isinstance(r, str) for r in reviews):
        raise ValueError("field 'reviews' must be an array of strings")
    year = raw.get("year", 0)
    if not isinstance(year, int):
        raise ValueError("field 'year' must be an integer")
    return CorpusEntry(
        id=raw["id"],
        title=raw["title"],
        abstract=raw["abstract"],
        venue=str(raw.get("venue", "")),
        year=year,
        reviews=tuple(reviews),
    )


def index_to_doc(index: CorpusIndex) -> dict:
    """Versioned JSON-safe document for an index (vectors zlib+base64, float64)."""
    packed = base64.b64encode(zlib.compress(index.vectors.astype(np.float64).tobytes())).decode()
    return {
        "schema": INDEX_SCHEMA_VERSION,
        "fingerprint": index.fingerprint,
        "dimension": index.dimension,
        "count": index.size,
        "entries": [
            {
                "id": e.id,
                "title": e.title,
                "abstract": e.abstract,
                "venue": e.venue,
                "year": e.year,
                "reviews": list(e.reviews),
            }
            for e in index.entries
        ],
        "vectors": packed,
    }


def index_from_doc(doc: dict) -> CorpusIndex:
    if doc.get("schema") != INDEX_SCHEMA_VERSION:
        raise IndexFormatError(f"unsupported index schema {doc.get('schema')!r}")
    entries = [_entry_from_dict(e) for e in doc["entries"]]
    raw = zlib.decompress(base64.b64decode(doc["vectors"]))
    vectors = np.frombuffer(raw, dtype=np.float64).reshape(doc["count"], doc["dimension"]).copy()
    return CorpusIndex(entries=entries, vectors=vectors, fingerprint=doc["fingerprint"])


def save_index(index: CorpusIndex, path: str | Path) -> None:
    Path(path).write_text(json.dumps(index_to_doc(index)), encoding="utf-8")


def load_index(path: str | Path) -> CorpusIndex:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise IndexFormatError(f"cannot read index {path}: {exc}") from exc
    return index_from_doc(doc)
