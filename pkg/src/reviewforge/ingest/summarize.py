"""Hierarchical summarization over a cluster tree.

The Summarizer interface admits an LLM-backed implementation; the default is
a deterministic extractive fallback (first sentence plus the highest-tf-idf
sentence of the cluster) so the pipeline runs and tests without any model.
"""

from __future__ import annotations

import logging
import math
import re
from collections import Counter
from typing import Protocol, Sequence

from .types import (
    ClusterNode,
    ClusterTree,
    HierarchicalSummary,
    Manuscript,
    SummarizerFailure,
    SummaryEntry,
)

logger = logging.getLogger(__name__)

DEFAULT_TOKEN_BUDGET = 2000

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class Summarizer(Protocol):
    """Condense an ordered block of sentences into a short summary."""

    def summarize(self, sentences: Sequence[str]) -> str: ...


class ExtractiveSummarizer:
    """First sentence plus the highest mean-tf-idf sentence, deterministic."""

    def summarize(self, sentences: Sequence[str]) -> str:
        sentences = [s for s in sentences if s.strip()]
        if not sentences:
            return ""
        if len(sentences) == 1:
            return sentences[0]
        token_lists = [_TOKEN_RE.findall(s.lower()) for s in sentences]
        df: Counter = Counter()
        for tokens in token_lists:
            df.update(set(tokens))
        n = len(sentences)

        def idf(token: str) -> float:
            return math.log((1 + n) / (1 + df[token])) + 1.0

        best_idx, best_score = 0, -1.0
        for i, tokens in enumerate(token_lists):
            if i == 0 or not tokens:
                continue
            tf = Counter(tokens)
            score = sum(count * idf(tok) for tok, count in tf.items()) / len(tokens)
            if score > best_score + 1e-12:
                best_idx, best_score = i, score
        if best_idx == 0:
            return sentences[0]
        return f"{sentences[0]} {sentences[best_idx]}"


def _leaf_depths(tree: ClusterTree) -> list[tuple[ClusterNode, int]]:
    out: list[tuple[ClusterNode, int]] = []

    def walk(node: ClusterNode, depth: int) -> None:
        if node.is_leaf:
            out.append((node, depth))
        else:
            for child in node.children:
                walk(child, depth + 1)

    walk(tree.root, 0)
    return out


def _section_paths_in(manuscript: Manuscript, start: int, end: int) -> tuple[tuple[int, ...], ...]:
    seen: list[tuple[int, ...]] = []
    for s in manuscript.sentences[start:end]:
        if s.section_path and s.section_path not in seen:
            seen.append(s.section_path)
    return tuple(seen)


def _format_entry(entry: SummaryEntry) -> str:
    if entry.level == 0:
        return f"== Overview ==\n{entry.text}"
    if entry.section_paths:
        labels = ", ".join(".".join(str(p) for p in path) for path in entry.section_paths)
    else:
        labels = "-"
    header = f"== Part (sentences {entry.start}-{entry.end - 1}, sections {labels}) =="
    return f"{header}\n{entry.text}"


def render_summary(entries: Sequence[SummaryEntry]) -> str:
    ordered = sorted(entries, key=lambda e: (e.level, e.start))
    return "\n\n".join(_format_entry(e) for e in ordered)


def _token_count(text: str) -> int:
    return len(text.split())


def summarize_hierarchy(
    tree: ClusterTree,
    manuscript: Manuscript,
    summarizer: Summarizer | None = None,
    token_budget: int = DEFAULT_TOKEN_BUDGET,
) -> HierarchicalSummary:
    """Summarize the document and every leaf cluster, then render to a budget.

    The rendered text keeps whole entries only: when over budget, the deepest
    entries are dropped first, in reverse document order within a level. The
    levels list always retains every computed entry.
    """
    summarizer = summarizer or ExtractiveSummarizer()
    sentences = manuscript.sentences
    n = len(sentences)

    def summarize_range(start: int, end: int) -> str:
        texts = [s.text for s in sentences[start:end]]
        try:
            return summarizer.summarize(texts)
        except Exception as exc:
            raise SummarizerFailure(
                f"summarizer failed on sentences [{start}, {end}): {exc}",
                start=start,
                end=end,
            ) from exc

    entries = [
        SummaryEntry(
            level=0,
            start=0,
            end=n,
            text=summarize_range(0, n),
            section_paths=_section_paths_in(manuscript, 0, n),
        )
    ]
    for leaf, depth in _leaf_depths(tree):
        leaf.summary = summarize_range(leaf.start, leaf.end)
        entries.append(
            SummaryEntry(
                level=max(depth, 1),
                start=leaf.start,
                end=leaf.end,
                text=leaf.summary,
                section_paths=_section_paths_in(manuscript, leaf.start, leaf.end),
            )
        )

    kept = sorted(entries, key=lambda e: (e.level, e.start))
    rendered = render_summary(kept)
    while kept and _token_count(rendered) > token_budget:
        drop_order = sorted(kept, key=lambda e: (-e.level, -e.start))
        kept.remove(drop_order[0])
        rendered = render_summary(kept)
    if not kept:
        rendered = ""

    return HierarchicalSummary(
        levels=sorted(entries, key=lambda e: (e.level, e.start)),
        rendered_text=rendered,
        token_budget=token_budget,
    )
