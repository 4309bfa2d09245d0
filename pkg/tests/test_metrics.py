"""Metric oracles: independent n-gram counting and a separate LCS routine."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reviewforge.embedding import EmptyText, HashedTrigramTokenEmbedder
from reviewforge.metrics import ScoreTriple, embed_sim, evaluate_pairs, rouge_l, rouge_n


# --- independent oracles ----------------------------------------------------


def oracle_ngrams(tokens, n):
    grams = []
    for i in range(len(tokens) - n + 1):
        grams.append(tuple(tokens[i : i + n]))
    return grams


def oracle_rouge_n(cand_tokens, ref_tokens, n):
    cand = oracle_ngrams(cand_tokens, n)
    ref = list(oracle_ngrams(ref_tokens, n))
    remaining = list(ref)
    overlap = 0
    for gram in cand:
        if gram in remaining:
            remaining.remove(gram)
            overlap += 1
    p = overlap / len(cand) if cand else 0.0
    r = overlap / len(ref) if ref else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def oracle_lcs(a, b):
    # Full quadratic table, recursive definition written out directly.
    rows = len(a) + 1
    cols = len(b) + 1
    table = [[0] * cols for _ in range(rows)]
    for i in range(1, rows):
        for j in range(1, cols):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[-1][-1]


def random_tokens(rng, max_len=20, vocab=8):
    return [f"w{rng.randint(0, vocab - 1)}" for _ in range(rng.randint(1, max_len))]


# --- ScoreTriple -------------------------------------------------------------


def test_f1_formula():
    t = ScoreTriple.from_pr(0.5, 0.25)
    assert t.f1 == pytest.approx(2 * 0.5 * 0.25 / 0.75)
    assert ScoreTriple.from_pr(0.0, 0.0).f1 == 0.0


# --- rouge_n ------------------------------------------------------------------


class TestRougeN:
    def test_identity(self):
        t = rouge_n("a b c", "a b c", 1)
        assert (t.precision, t.recall, t.f1) == (1.0, 1.0, 1.0)

    def test_hand_counted_unigrams(self):
        t = rouge_n("a b c", "a b d", 1)
        assert t.precision == pytest.approx(2 / 3)
        assert t.recall == pytest.approx(2 / 3)
        assert t.f1 == pytest.approx(2 / 3)

    def test_disjoint(self):
        t = rouge_n("a b", "c d", 1)
        assert (t.precision, t.recall, t.f1) == (0.0, 0.0, 0.0)

    def test_clipping(self):
        # "a" appears twice in candidate but once in reference: clipped to 1.
        t = rouge_n("a a", "a b", 1)
        assert t.precision == pytest.approx(0.5)
        assert t.recall == pytest.approx(0.5)

    def test_empty_text(self):
        with pytest.raises(EmptyText):
            rouge_n("", "a b", 1)
        with pytest.raises(EmptyText):
            rouge_n("a b", "...", 1)

    def test_n_longer_than_text(self):
        t = rouge_n("a", "a", 2)
        assert (t.precision, t.recall, t.f1) == (0.0, 0.0, 0.0)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_matches_oracle(self, n):
        rng = random.Random(500 + n)
        for _ in range(300):
            cand = random_tokens(rng)
            ref = random_tokens(rng)
            got = rouge_n(" ".join(cand), " ".join(ref), n)
            p, r, f = oracle_rouge_n(cand, ref, n)
            assert got.precision == pytest.approx(p, abs=1e-12)
            assert got.recall == pytest.approx(r, abs=1e-12)
            assert got.f1 == pytest.approx(f, abs=1e-12)


class TestRougeL:
    def test_hand_enumerated_lcs(self):
        t = rouge_l("a b c d", "a c b d")
        assert t.precision == pytest.approx(0.75)
        assert t.recall == pytest.approx(0.75)

    def test_identity(self):
        t = rouge_l("x y z", "x y z")
        assert (t.precision, t.recall, t.f1) == (1.0, 1.0, 1.0)

    def test_subsequence_containment(self):
        t = rouge_l("the quick brown fox jumps", "quick fox jumps")
        assert t.recall == 1.0

    def test_matches_oracle(self):
        rng = random.Random(77)
        for _ in range(300):
            cand = random_tokens(rng)
            ref = random_tokens(rng)
            got = rouge_l(" ".join(cand), " ".join(ref))
            lcs = oracle_lcs(cand, ref)
            assert got.precision == pytest.approx(lcs / len(cand), abs=1e-12)
            assert got.recall == pytest.approx(lcs / len(ref), abs=1e-12)


class TestEmbedSim:
    def test_identity(self):
        t = embed_sim("alpha beta gamma", "alpha beta gamma")
        assert t.f1 == pytest.approx(1.0, abs=1e-9)

    def test_multiset_equality_gives_one(self):
        t = embed_sim("b a a", "a b a")
        assert t.f1 == pytest.approx(1.0, abs=1e-9)

    def test_orthogonal_single_tokens(self):
        e = HashedTrigramTokenEmbedder(512)
        va = e.embed_token("qqq")
        vb = e.embed_token("zzz")
        assert abs(float(va @ vb)) < 1e-12, "fixture tokens must be trigram-disjoint"
        t = embed_sim("qqq", "zzz", e)
        assert t.f1 == pytest.approx(0.0, abs=1e-12)

    def test_containment_precision(self):
        t = embed_sim("alpha beta", "alpha beta gamma delta")
        assert t.precision == pytest.approx(1.0, abs=1e-9)
        assert t.recall < 1.0


# --- shared properties --------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.sampled_from("abcdefgh"), min_size=1, max_size=15),
    st.lists(st.sampled_from("abcdefgh"), min_size=1, max_size=15),
)
def test_symmetry_and_bounds(cand_tokens, ref_tokens):
    cand = " ".join(cand_tokens)
    ref = " ".join(ref_tokens)
    for metric in (lambda a, b: rouge_n(a, b, 1), lambda a, b: rouge_n(a, b, 2), rouge_l):
        fwd = metric(cand, ref)
        rev = metric(ref, cand)
        assert fwd.precision == pytest.approx(rev.recall, abs=1e-12)
        assert fwd.recall == pytest.approx(rev.precision, abs=1e-12)
        for v in (fwd.precision, fwd.recall, fwd.f1):
            assert 0.0 <= v <= 1.0 + 1e-12
        assert fwd.f1 <= max(fwd.precision, fwd.recall) + 1e-12
    es_fwd = embed_sim(cand, ref)
    es_rev = embed_sim(ref, cand)
    assert es_fwd.precision == pytest.approx(es_rev.recall, abs=1e-9)


def test_evaluate_pairs_aggregate():
    report = evaluate_pairs([("a b c", "a b c"), ("a b", "c d")])
    agg = report["aggregate"]
    assert agg["count"] == 2
    assert agg["rouge1_f1"] == pytest.approx((1.0 + 0.0) / 2)
    assert len(report["pairs"]) == 2
