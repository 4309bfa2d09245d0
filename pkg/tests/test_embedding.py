"""Hashed embedding fallbacks: determinism, normalization, bucket behavior."""

import numpy as np
import pytest

from reviewforge.embedding import (
    EmbedderFailure,
    HashedBagOfWordsEmbedder,
    HashedTrigramTokenEmbedder,
    stable_bucket,
    tokenize,
)


def test_tokenize_lowercase_alnum():
    assert tokenize("Hello, World! x2") == ["hello", "world", "x2"]


def test_identical_texts_identical_vectors():
    e = HashedBagOfWordsEmbedder(512)
    a = e.embed("the quick brown fox")
    b = e.embed("the quick brown fox")
    assert np.array_equal(a, b)


def test_unit_norm():
    e = HashedBagOfWordsEmbedder(4096)
    for text in ("one", "a b c d e f g", "repeat repeat repeat"):
        assert np.linalg.norm(e.embed(text)) == pytest.approx(1.0, abs=1e-6)


def test_disjoint_tokens_orthogonal_without_collisions():
    e = HashedBagOfWordsEmbedder(4096)
    left = "alpha beta gamma delta"
    right = "epsilon zeta eta theta"
    buckets_left = {stable_bucket(t, 4096) for t in tokenize(left)}
    buckets_right = {stable_bucket(t, 4096) for t in tokenize(right)}
    assert not buckets_left & buckets_right, "fixture tokens must not collide"
    assert float(e.embed(left) @ e.embed(right)) == pytest.approx(0.0)


def test_raw_counts_scale_with_repetition():
    e = HashedBagOfWordsEmbedder(256)
    single = e.raw_counts("word")
    double = e.raw_counts("word word")
    assert np.array_equal(double, 2 * single)


def test_no_tokens_raises():
    e = HashedBagOfWordsEmbedder(64)
    with pytest.raises(EmbedderFailure):
        e.embed("!!! ---")


def test_bucket_stability_across_instances():
    assert stable_bucket("calibration", 4096) == stable_bucket("calibration", 4096)
    a = HashedBagOfWordsEmbedder(1024).embed("drift study")
    b = HashedBagOfWordsEmbedder(1024).embed("drift study")
    assert np.array_equal(a, b)


class TestTokenEmbedder:
    def test_unit_norm_and_cache(self):
        e = HashedTrigramTokenEmbedder(512)
        v1 = e.embed_token("calibration")
        assert np.linalg.norm(v1) == pytest.approx(1.0, abs=1e-9)
        v2 = e.embed_token("calibration")
        assert v1 is v2  # cached

    def test_short_token(self):
        e = HashedTrigramTokenEmbedder(128)
        assert e.trigrams("a") == ["^a$"]
        assert np.linalg.norm(e.embed_token("a")) == pytest.approx(1.0)

    def test_similar_tokens_share_trigrams(self):
        e = HashedTrigramTokenEmbedder(512)
        sim_near = float(e.embed_token("calibrate") @ e.embed_token("calibrated"))
        sim_far = float(e.embed_token("calibrate") @ e.embed_token("zeppelin"))
        assert sim_near > sim_far
