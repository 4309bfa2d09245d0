"""Embedder interface with deterministic hash-based fallbacks.

External embedding endpoints can implement the same protocol; every test and
the default pipeline run on the hashed fallbacks so no model is required.
Hashing uses blake2b, not Python's randomized hash(), so vectors are stable
across processes.
"""

from __future__ import annotations

import hashlib
import re
from typing import Protocol, runtime_checkable

import numpy as np

from .errors import ReviewForgeError

DEFAULT_DIMENSION = 4096
TOKEN_EMBED_DIMENSION = 512

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class EmptyText(ReviewForgeError):
    """Operation requires non-empty text."""


class EmbedderFailure(ReviewForgeError):
    """An embedder raised; carries the offending item id when known."""

    def __init__(self, message: str, item_id: str | None = None):
        super().__init__(message)
        self.item_id = item_id


def tokenize(text: str) -> list[str]:
    """Lowercase alphanumeric tokens; the package-wide tokenization rule."""
    return _TOKEN_RE.findall(text.lower())


def stable_bucket(token: str, dimension: int) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % dimension


@runtime_checkable
class Embedder(Protocol):
    """Maps text to a unit-norm vector of a fixed dimension."""

    dimension: int
    fingerprint: str

    def embed(self, text: str) -> np.ndarray: ...


class HashedBagOfWordsEmbedder:
    """Deterministic fallback: token counts hashed into a fixed dimension."""

    def __init__(self, dimension: int = DEFAULT_DIMENSION):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.dimension = dimension
        self.fingerprint = f"hashed-bow/blake2b/{dimension}"

    def raw_counts(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dimension, dtype=np.float64)
        for token in tokenize(text):
            vec[stable_bucket(token, self.dimension)] += 1.0
        return vec

    def embed(self, text: str) -> np.ndarray:
        vec = self.raw_counts(text)
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise EmbedderFailure("text has no embeddable tokens")
        return vec / norm


class TokenEmbedder(Protocol):
    """Maps a single token to a unit-norm vector (greedy-matching metrics)."""

    dimension: int

    def embed_token(self, token: str) -> np.ndarray: ...


class HashedTrigramTokenEmbedder:
    """Per-token fallback: character trigrams of '^token$' hashed and normalized."""

    def __init__(self, dimension: int = TOKEN_EMBED_DIMENSION):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.dimension = dimension
        self.fingerprint = f"hashed-trigram/blake2b/{dimension}"
        self._cache: dict[str, np.ndarray] = {}

    def trigrams(self, token: str) -> list[str]:
        padded = f"^{token}$"
        if len(padded) <= 3:
            return [padded]
        return [padded[i : i + 3] for i in range(len(padded) - 2)]

    def embed_token(self, token: str) -> np.ndarray:
        cached = self._cache.get(token)
        if cached is not None:
            return cached
        vec = np.zeros(self.dimension, dtype=np.float64)
        for gram in self.trigrams(token):
            vec[stable_bucket(gram, self.dimension)] += 1.0
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise EmbedderFailure(f"token {token!r} produced no trigrams")
        vec /= norm
        self._cache[token] = vec
        return vec
