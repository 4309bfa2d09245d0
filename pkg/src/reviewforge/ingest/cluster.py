"""Recursive top-down text clustering.

A partition of the sentence list is scored by two terms: a burst term that
rewards breakpoints where the local vocabulary shifts sharply (one minus the
cosine between term-frequency vectors of the windows on either side), and a
balance term that penalizes unequal cluster sizes. The total is
``burst + alpha * balance``; recursion greedily picks the best single
breakpoint per node.
"""

from __future__ import annotations

import logging
import math
import re
from collections import Counter
from typing import Sequence, Union

from .types import ClusterNode, ClusterTree, EmptyInput, InvalidBoundaries, PartitionScore, Sentence

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.5
DEFAULT_WINDOW = 3
DEFAULT_MIN_CLUSTER = 4
DEFAULT_MAX_DEPTH = 3

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_TIE_EPS = 1e-12

SentenceLike = Union[str, Sentence]


def _text_of(sentence: SentenceLike) -> str:
    return sentence.text if isinstance(sentence, Sentence) else sentence


def _tokens(sentence: SentenceLike) -> list[str]:
    return _TOKEN_RE.findall(_text_of(sentence).lower())


def _tf_vector(sentences: Sequence[SentenceLike]) -> Counter:
    counts: Counter = Counter()
    for s in sentences:
        counts.update(_tokens(s))
    return counts


def _cosine(a: Counter, b: Counter) -> float:
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    dot = sum(count * b[token] for token, count in a.items())
    norm_a = math.sqrt(sum(c * c for c in a.values()))
    norm_b = math.sqrt(sum(c * c for c in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return dot / (norm_a * norm_b)


def boundary_novelty(
    sentences: Sequence[SentenceLike], boundary: int, window: int = DEFAULT_WINDOW
) -> float:
    """Burst contribution of one breakpoint: 1 - cos(tf(left), tf(right))."""
    left = sentences[max(0, boundary - window) : boundary]
    right = sentences[boundary : boundary + window]
    return 1.0 - _cosine(_tf_vector(left), _tf_vector(right))


def score_partition(
    sentences: Sequence[SentenceLike],
    boundaries: Sequence[int],
    alpha: float = DEFAULT_ALPHA,
    window: int = DEFAULT_WINDOW,
) -> PartitionScore:
    """Score the partition induced by ordered breakpoint indices.

    burst sums the windowed tf-cosine novelty of each breakpoint; balance is
    the negative mean squared relative deviation of cluster sizes from n/k.
    """
    n = len(sentences)
    if n == 0:
        raise EmptyInput("cannot score an empty sentence list")
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if window < 1:
        raise ValueError("window must be >= 1")
    previous = 0
    for b in boundaries:
        if not 0 < b < n:
            raise InvalidBoundaries(f"boundary {b} outside (0, {n})")
        if b <= previous and previous != 0:
            raise InvalidBoundaries(f"boundaries not strictly increasing at {b}")
        previous = b
    if len(set(boundaries)) != len(boundaries):
        raise InvalidBoundaries("duplicate boundaries")

    burst = sum(boundary_novelty(sentences, b, window) for b in boundaries)

    k = len(boundaries) + 1
    edges = [0, *boundaries, n]
    target = n / k
    balance = -(1.0 / k) * sum(
        ((edges[i + 1] - edges[i]) - target) ** 2 / target**2 for i in range(k)
    )
    total = burst + alpha * balance
    return PartitionScore(burst=burst, balance=balance, alpha=alpha, total=total)


def _section_starts(sentences: Sequence[SentenceLike]) -> set[int]:
    starts: set[int] = set()
    for i in range(1, len(sentences)):
        a, b = sentences[i - 1], sentences[i]
        if isinstance(a, Sentence) and isinstance(b, Sentence) and a.section_path != b.section_path:
            starts.add(i)
    return starts


def cluster_recursive(
    sentences: Sequence[SentenceLike],
    alpha: float = DEFAULT_ALPHA,
    min_cluster: int = DEFAULT_MIN_CLUSTER,
    max_depth: int = DEFAULT_MAX_DEPTH,
    window: int = DEFAULT_WINDOW,
) -> ClusterTree:
    """Greedy top-down clustering, iterated to a fixpoint of the objective.

    A candidate breakpoint is scored by how much it improves the document
    partition objective: its burst novelty plus alpha times the change of the
    global balance term.  At the first split (empty partition) this reduces
    exactly to scoring the single-boundary partition, so the root breakpoint
    is the plain argmax over single boundaries.  Leaves are then re-swept in
    document order until no further split improves the objective; re-sweeping
    matters because a small cut that looks balance-costly next to one big
    cluster becomes profitable once that cluster is split.  Novelty windows
    truncate at document edges, not at the node's range.  A leaf splits only
    while its depth is below max_depth and it holds at least 2*min_cluster
    sentences; ties prefer a breakpoint that coincides with a section start,
    then the leftmost.
    """
    if not sentences:
        raise EmptyInput("cannot cluster an empty sentence list")
    if min_cluster < 1:
        raise ValueError("min_cluster must be >= 1")
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")

    n = len(sentences)
    section_starts = _section_starts(sentences)
    novelty_cache: dict[int, float] = {}
    chosen: list[int] = []

    def novelty(b: int) -> float:
        if b not in novelty_cache:
            novelty_cache[b] = boundary_novelty(sentences, b, window)
        return novelty_cache[b]

    def global_balance(boundaries: list[int]) -> float:
        edges = [0, *sorted(boundaries), n]
        k = len(edges) - 1
        target = n / k
        return -(1.0 / k) * sum(
            (edges[i + 1] - edges[i] - target) ** 2 / target**2 for i in range(k)
        )

    def best_cut(node: ClusterNode) -> tuple[float, int | None]:
        base_balance = global_balance(chosen)
        best_gain = -math.inf
        best_boundary = None
        best_is_section = False
        for b in range(node.start + min_cluster, node.end - min_cluster + 1):
            gain = novelty(b) + alpha * (global_balance(chosen + [b]) - base_balance)
            is_section = b in section_starts
            if gain > best_gain + _TIE_EPS:
                best_gain, best_boundary, best_is_section = gain, b, is_section
            elif abs(gain - best_gain) <= _TIE_EPS and is_section and not best_is_section:
                best_boundary, best_is_section = b, is_section
        return best_gain, best_boundary

    root = ClusterNode(start=0, end=n)
    frontier: list[tuple[ClusterNode, int]] = [(root, 0)]
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(frontier):
            node, depth = frontier[i]
            if depth >= max_depth or node.size < 2 * min_cluster:
                i += 1
                continue
            gain, boundary = best_cut(node)
            if boundary is None or gain <= 0:
                i += 1
                continue
            node.score = gain
            chosen.append(boundary)
            left = ClusterNode(start=node.start, end=boundary)
            right = ClusterNode(start=boundary, end=node.end)
            node.children = [left, right]
            frontier[i : i + 1] = [(left, depth + 1), (right, depth + 1)]
            changed = True
    return ClusterTree(root=root)
