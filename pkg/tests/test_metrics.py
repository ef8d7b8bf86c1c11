from __future__ import annotations

import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simbench.errors import InputError, NumericError
from simbench.metrics import (
    Bm25Params,
    bm25_batch,
    bm25_raw,
    corpus_stats,
    cosine,
    idf,
    jaccard,
    lcs_length,
    levenshtein_ratio,
    minmax_normalize,
    rouge_avg_f,
)
from simbench.rng import Rng


def edit_distance_sub2(a: str, b: str) -> int:
    """Oracle: DP edit distance with substitution cost 2, indel cost 1."""
    prev = list(range(0, 2 * len(b) + 1, 1))[: len(b) + 1]
    prev = [j for j in range(len(b) + 1)]
    for i in range(1, len(a) + 1):
        row = [i]
        for j in range(1, len(b) + 1):
            sub = prev[j - 1] + (0 if a[i - 1] == b[j - 1] else 2)
            row.append(min(prev[j] + 1, row[j - 1] + 1, sub))
        prev = row
    return prev[-1]


def lev_ratio_oracle(a: str, b: str) -> float:
    total = len(a) + len(b)
    if total == 0:
        return 1.0
    return (total - edit_distance_sub2(a, b)) / total


def all_strings(alphabet: str, max_len: int):
    yield ""
    frontier = [""]
    for _ in range(max_len):
        frontier = [s + c for s in frontier for c in alphabet]
        yield from frontier


class TestLevenshteinRatio:
    def test_identity(self):
        assert levenshtein_ratio("abc", "abc").value == 1.0

    def test_no_common_characters(self):
        assert levenshtein_ratio("ab", "cd").value == 0.0

    def test_kitten_sitting(self):
        assert levenshtein_ratio("kitten", "sitting").value == pytest.approx(8 / 13)

    def test_empty_conventions(self):
        assert levenshtein_ratio("", "").value == 1.0
        assert levenshtein_ratio("", "abc").value == 0.0

    def test_matches_dp_oracle_exhaustively(self):
        strings = list(all_strings("abc", 4))
        for a in strings:
            for b in strings:
                assert levenshtein_ratio(a, b).value == pytest.approx(
                    lev_ratio_oracle(a, b)
                ), (a, b)

    @given(st.text(max_size=40), st.text(max_size=40))
    @settings(max_examples=200, deadline=None)
    def test_range_and_symmetry(self, a, b):
        value = levenshtein_ratio(a, b).value
        assert 0.0 <= value <= 1.0
        assert value == levenshtein_ratio(b, a).value

    def test_lcs_against_plain_dp(self):
        def lcs_dp(a, b):
            table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
            for i in range(1, len(a) + 1):
                for j in range(1, len(b) + 1):
                    if a[i - 1] == b[j - 1]:
                        table[i][j] = table[i - 1][j - 1] + 1
                    else:
                        table[i][j] = max(table[i - 1][j], table[i][j - 1])
            return table[-1][-1]

        rng = Rng(17)
        alphabet = "abcde"
        for _ in range(300):
            a = "".join(alphabet[rng.below(5)] for _ in range(rng.below(30)))
            b = "".join(alphabet[rng.below(5)] for _ in range(rng.below(30)))
            assert lcs_length(a, b) == lcs_dp(a, b), (a, b)


def rouge_oracle(candidate: str, reference: str, tokenizer) -> float:
    """Independent n-gram F computation via explicit loops."""
    cand = list(tokenizer.encode(candidate).tokens)
    ref = list(tokenizer.encode(reference).tokens)
    fs = []
    for n in (1, 2):
        cand_grams = [tuple(cand[i : i + n]) for i in range(len(cand) - n + 1)]
        ref_grams = [tuple(ref[i : i + n]) for i in range(len(ref) - n + 1)]
        if not cand_grams or not ref_grams:
            fs.append(0.0)
            continue
        remaining = Counter(ref_grams)
        hits = 0
        for gram in cand_grams:
            if remaining[gram] > 0:
                remaining[gram] -= 1
                hits += 1
        precision = hits / len(cand_grams)
        recall = hits / len(ref_grams)
        fs.append(
            0.0
            if precision + recall == 0
            else 2 * precision * recall / (precision + recall)
        )
    return sum(fs) / 2


class TestRouge:
    def test_hand_counted_example(self, tok):
        assert rouge_avg_f("the cat sat", "the cat", tok).value == pytest.approx(
            (0.8 + 2 / 3) / 2
        )

    def test_identity_with_two_or_more_tokens(self, tok):
        for text in ["a b", "one two three", "the quick brown fox"]:
            assert rouge_avg_f(text, text, tok).value == 1.0

    def test_disjoint_vocabulary(self, tok):
        assert rouge_avg_f("aa bb cc", "xx yy zz", tok).value == 0.0

    def test_single_token_identity_has_no_bigrams(self, tok):
        assert rouge_avg_f("word", "word", tok).value == 0.5

    def test_matches_oracle_on_random_texts(self, tok):
        rng = Rng(23)
        words = ["red", "blue", "green", "fast", "slow", "cat", "dog", "sun"]
        for _ in range(100):
            cand = " ".join(words[rng.below(len(words))] for _ in range(rng.below(9)))
            ref = " ".join(words[rng.below(len(words))] for _ in range(rng.below(9)))
            assert rouge_avg_f(cand, ref, tok).value == pytest.approx(
                rouge_oracle(cand, ref, tok)
            ), (cand, ref)


class TestJaccard:
    def test_identity(self, tok):
        assert jaccard("some words here", "some words here", tok).value == 1.0

    def test_half_overlap_sets(self, tok):
        # token sets { a, b, c} vs { b, c, d}: intersection 2, union 4
        assert jaccard(" a b c", " b c d", tok).value == 0.5

    def test_disjoint(self, tok):
        assert jaccard("aa bb", "cc dd", tok).value == 0.0

    def test_both_empty(self, tok):
        assert jaccard("", "", tok).value == 1.0

    def test_matches_set_oracle(self, tok):
        rng = Rng(31)
        words = ["ant", "bee", "cow", "doe", "elk", "fox"]
        for _ in range(100):
            a = " ".join(words[rng.below(len(words))] for _ in range(rng.below(8)))
            b = " ".join(words[rng.below(len(words))] for _ in range(rng.below(8)))
            set_a = set(tok.encode(a).tokens)
            set_b = set(tok.encode(b).tokens)
            expected = 1.0 if not set_a and not set_b else len(set_a & set_b) / len(set_a | set_b)
            assert jaccard(a, b, tok).value == pytest.approx(expected)


class TestBm25:
    def test_params_validation(self):
        with pytest.raises(InputError):
            Bm25Params(k1=0)
        with pytest.raises(InputError):
            Bm25Params(b=1.5)
        with pytest.raises(InputError):
            Bm25Params(delta=-1)

    def test_identical_docs_degenerate_to_half(self, tok):
        scores = bm25_batch("query terms", ["same doc"] * 4, Bm25Params(), tok)
        assert [s.value for s in scores] == [0.5] * 4

    def test_full_vs_no_overlap(self, tok):
        scores = bm25_batch(
            "apple pie",
            ["apple pie recipe with apple", "unrelated words entirely"],
            Bm25Params(),
            tok,
        )
        assert [s.value for s in scores] == [1.0, 0.0]

    def test_normalization_preserves_argmax(self, tok):
        rng = Rng(41)
        words = ["mast", "sail", "rope", "deck", "wind", "rock"]
        for _ in range(25):
            docs = [
                " ".join(words[rng.below(len(words))] for _ in range(1 + rng.below(8)))
                for _ in range(4)
            ]
            query = " ".join(words[rng.below(len(words))] for _ in range(3))
            query_tokens = tok.encode(query).tokens
            doc_tokens = [tok.encode(d).tokens for d in docs]
            raw = bm25_raw(query_tokens, doc_tokens, Bm25Params())
            normalized = [s.value for s in bm25_batch(query, docs, Bm25Params(), tok)]
            assert all(0.0 <= v <= 1.0 for v in normalized)
            assert raw.index(max(raw)) == normalized.index(max(normalized))

    def test_empty_docs_rejected(self, tok):
        with pytest.raises(InputError):
            bm25_batch("q", [], Bm25Params(), tok)

    def test_minmax_degenerate(self):
        assert minmax_normalize([2.0, 2.0]) == [0.5, 0.5]
        assert minmax_normalize([1.0, 3.0, 2.0]) == [0.0, 1.0, 0.5]


class TestIdf:
    def test_term_in_every_doc_is_floored(self, tok):
        params = Bm25Params()
        docs = [tok.encode(t).tokens for t in ["cat dog", "cat bird", "cat fish"]]
        stats = corpus_stats(docs, params)
        cat = tok.encode("cat").tokens[0]
        raw_values = {
            term: math.log((3 - n + 0.5) / (n + 0.5))
            for term, n in stats.doc_freq.items()
        }
        positive = [v for v in raw_values.values() if v > 0]
        expected_floor = params.epsilon * (sum(positive) / len(positive))
        assert idf(cat, stats, params) == pytest.approx(expected_floor)

    def test_unseen_term_gets_maximal_idf(self, tok):
        params = Bm25Params()
        docs = [tok.encode(t).tokens for t in ["cat dog", "cat bird", "cat fish"]]
        stats = corpus_stats(docs, params)
        unseen = tok.encode("zebra").tokens[0]
        expected = math.log((3 + 0.5) / 0.5)
        assert idf(unseen, stats, params) == pytest.approx(expected)
        assert all(
            idf(unseen, stats, params) >= idf(t, stats, params)
            for t in stats.doc_freq
        )

    def test_single_doc_batch_present_term_floored(self, tok):
        params = Bm25Params()
        docs = [tok.encode("only doc").tokens]
        stats = corpus_stats(docs, params)
        term = docs[0][0]
        # ln(0.5/1.5) < 0, and the batch has no positive idf: floor is 0
        assert idf(term, stats, params) == 0.0


class TestCosine:
    def test_self_similarity(self):
        assert cosine((1.0, 2.0, 3.0), (1.0, 2.0, 3.0)).value == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine((1.0, 0.0), (0.0, 1.0)).value == 0.0

    def test_hand_value(self):
        assert cosine((1.0, 1.0), (1.0, 0.0)).value == pytest.approx(1 / math.sqrt(2))

    def test_unit_norm_equals_dot(self):
        u = (0.6, 0.8)
        v = (0.8, 0.6)
        assert abs(cosine(u, v).value - (0.6 * 0.8 + 0.8 * 0.6)) < 1e-9

    def test_errors(self):
        with pytest.raises(NumericError):
            cosine((0.0, 0.0), (1.0, 0.0))
        with pytest.raises(InputError):
            cosine((1.0, 0.0), (1.0, 0.0, 0.0))
