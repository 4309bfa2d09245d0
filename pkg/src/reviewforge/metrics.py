"""Text-overlap and embedding-similarity metrics, plus actionable-item counting.

Tokenization is fixed (lowercase alphanumeric) so scores are reproducible.
The embedding similarity is an embedder-agnostic greedy matching: precision
averages each candidate token's best cosine against the reference tokens, and
a contextual token embedder can be swapped in without any API change.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .embedding import EmbedderFailure, EmptyText, HashedTrigramTokenEmbedder, TokenEmbedder, tokenize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScoreTriple:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "ScoreTriple":
        if precision + recall > 0:
            f1 = 2 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
        return cls(precision=precision, recall=recall, f1=f1)


def _require_tokens(text: str, which: str) -> list[str]:
    if not text or not text.strip():
        raise EmptyText(f"{which} text is empty")
    tokens = tokenize(text)
    if not tokens:
        raise EmptyText(f"{which} text has no alphanumeric tokens")
    return tokens


def _ngrams(tokens: Sequence[str], n: int) -> dict[tuple[str, ...], int]:
    counts: dict[tuple[str, ...], int] = {}
    for i in range(len(tokens) - n + 1):
        gram = tuple(tokens[i : i + n])
        counts[gram] = counts.get(gram, 0) + 1
    return counts


def rouge_n(candidate: str, reference: str, n: int = 1) -> ScoreTriple:
    """Clipped n-gram overlap; precision over candidate, recall over reference."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = _ngrams(_require_tokens(candidate, "candidate"), n)
    ref = _ngrams(_require_tokens(reference, "reference"), n)
    overlap = sum(min(count, ref.get(gram, 0)) for gram, count in cand.items())
    cand_total = sum(cand.values())
    ref_total = sum(ref.values())
    precision = overlap / cand_total if cand_total else 0.0
    recall = overlap / ref_total if ref_total else 0.0
    return ScoreTriple.from_pr(precision, recall)


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for x in a:
        current = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l(candidate: str, reference: str) -> ScoreTriple:
    """Longest-common-subsequence overlap with the same tokenization as rouge_n."""
    cand = _require_tokens(candidate, "candidate")
    ref = _require_tokens(reference, "reference")
    lcs = _lcs_length(cand, ref)
    return ScoreTriple.from_pr(lcs / len(cand), lcs / len(ref))


def embed_sim(
    candidate: str, reference: str, embedder: TokenEmbedder | None = None
) -> ScoreTriple:
    """Greedy-matching embedding similarity over per-token vectors."""
    cand = _require_tokens(candidate, "candidate")
    ref = _require_tokens(reference, "reference")
    embedder = embedder or HashedTrigramTokenEmbedder()
    try:
        cand_vecs = np.stack([embedder.embed_token(t) for t in cand])
        ref_vecs = np.stack([embedder.embed_token(t) for t in ref])
    except EmbedderFailure:
        raise
    except Exception as exc:
        raise EmbedderFailure(f"token embedder failed: {exc}") from exc
    sims = cand_vecs @ ref_vecs.T  # unit-norm rows: dot = cosine
    precision = float(np.mean(np.max(sims, axis=1)))
    recall = float(np.mean(np.max(sims, axis=0)))
    return ScoreTriple.from_pr(max(0.0, precision), max(0.0, recall))


def count_actionable(review) -> int:
    """Number of grammatical to-do items in a parsed review.

    Every parsed TodoItem carries a well-formed locator (malformed lines never
    become items), so the actionable count is the item count.
    """
    return len(review.todos)


# ---------------------------------------------------------------------------
# Batch evaluation over (candidate, reference) pairs


@dataclass
class PairScores:
    index: int
    rouge1_f1: float
    rouge2_f1: float
    rougel_f1: float
    embed_f1: float


def evaluate_pairs(pairs: Iterable[tuple[str, str]], embedder: TokenEmbedder | None = None) -> dict:
    """Score each (candidate, reference) pair and aggregate the means."""
    embedder = embedder or HashedTrigramTokenEmbedder()
    rows: list[PairScores] = []
    for i, (candidate, reference) in enumerate(pairs):
        rows.append(
            PairScores(
                index=i,
                rouge1_f1=rouge_n(candidate, reference, 1).f1,
                rouge2_f1=rouge_n(candidate, reference, 2).f1,
                rougel_f1=rouge_l(candidate, reference).f1,
                embed_f1=embed_sim(candidate, reference, embedder).f1,
            )
        )
    if not rows:
        raise ValueError("no pairs to evaluate")

    def mean(values: list[float]) -> float:
        return sum(values) / len(values)

    return {
        "pairs": [vars(r) for r in rows],
        "aggregate": {
            "count": len(rows),
            "rouge1_f1": mean([r.rouge1_f1 for r in rows]),
            "rouge2_f1": mean([r.rouge2_f1 for r in rows]),
            "rougel_f1": mean([r.rougel_f1 for r in rows]),
            "embed_f1": mean([r.embed_f1 for r in rows]),
        },
    }


def evaluate_pair_file(path: str | Path, csv_path: str | Path | None = None) -> dict:
    """Evaluate a JSON Lines file of {"candidate", "reference"} records."""
    pairs: list[tuple[str, str]] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        record = json.loads(line)
        try:
            pairs.append((record["candidate"], record["reference"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"line {lineno}: expected candidate/reference fields") from exc
    report = evaluate_pairs(pairs)
    if csv_path is not None:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(
                fh, fieldnames=["index", "rouge1_f1", "rouge2_f1", "rougel_f1", "embed_f1"]
            )
            writer.writeheader()
            for row in report["pairs"]:
                writer.writerow(row)
    return report
