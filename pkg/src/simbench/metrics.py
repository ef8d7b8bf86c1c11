"""Classical pairwise similarity metrics and vector cosine.

Conventions that matter and are pinned by tests:

* The edit-distance ratio uses substitution cost 2 (insert/delete cost 1),
  so it equals ``2 * matches / (|a| + |b|)`` where matches is the length
  of the longest common subsequence of the optimal alignment.
* No case folding or stop-word removal anywhere: surface changes such as
  random capitalization must remain visible to token-based metrics.
* Empty-vs-empty pairs score 1.0 for the ratio and Jaccard metrics so the
  identity property holds universally.
* BM25+ scores are batch-relative: raw scores are min-max normalized over
  the documents of one call, and a degenerate batch (max == min) maps
  every document to 0.5.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, NumericError
from .tokenization import Tokenizer

CLASSICAL_METRICS = ("levenshtein", "rouge", "jaccard", "bm25")


@dataclass(frozen=True)
class PairScore:
    """A similarity value tagged with the metric that produced it."""

    value: float
    metric_id: str

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class Bm25Params:
    k1: float = 1.5
    b: float = 0.75
    epsilon: float = 0.25
    delta: float = 1.0

    def __post_init__(self) -> None:
        if self.k1 <= 0:
            raise InputError("bm25 k1 must be > 0")
        if not 0 <= self.b <= 1:
            raise InputError("bm25 b must be in [0, 1]")
        if self.epsilon < 0 or self.delta < 0:
            raise InputError("bm25 epsilon and delta must be >= 0")


def lcs_length(a: str, b: str) -> int:
    """Longest-common-subsequence length via the bit-parallel row update.

    Each DP row is encoded as an n-bit integer whose zero bits mark the
    columns where the row value increased; per character of ``b``:

        U = V & mask(c);  V = ((V + U) | (V - U)) & ((1 << n) - 1)

    and the result is the number of zero bits left in V.
    """
    n = len(a)
    if n == 0 or len(b) == 0:
        return 0
    masks: dict[str, int] = {}
    for i, ch in enumerate(a):
        masks[ch] = masks.get(ch, 0) | (1 << i)
    full = (1 << n) - 1
    v = full
    for ch in b:
        u = v & masks.get(ch, 0)
        v = ((v + u) | (v - u)) & full
    return n - bin(v).count("1")


def levenshtein_ratio(a: str, b: str) -> PairScore:
    """Normalized similarity from edit distance with substitution cost 2.

    Equals ((|a|+|b|) - d2(a, b)) / (|a|+|b|); defined as 1.0 when both
    strings are empty.
    """
    total = len(a) + len(b)
    if total == 0:
        return PairScore(1.0, "levenshtein")
    return PairScore(2.0 * lcs_length(a, b) / total, "levenshtein")


def _ngram_f1(cand: Sequence[int], ref: Sequence[int], n: int) -> float:
    cand_grams = Counter(zip(*(cand[i:] for i in range(n)))) if len(cand) >= n else Counter()
    ref_grams = Counter(zip(*(ref[i:] for i in range(n)))) if len(ref) >= n else Counter()
    if not cand_grams or not ref_grams:
        return 0.0
    overlap = sum(min(count, ref_grams[gram]) for gram, count in cand_grams.items())
    precision = overlap / sum(cand_grams.values())
    recall = overlap / sum(ref_grams.values())
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def rouge_avg_f(candidate: str, reference: str, tokenizer: Tokenizer) -> PairScore:
    """Mean of the unigram and bigram overlap F-measures on token ids.

    An n-gram level where either side has no n-grams contributes F = 0.
    """
    cand = tokenizer.encode(candidate).tokens
    ref = tokenizer.encode(reference).tokens
    value = (_ngram_f1(cand, ref, 1) + _ngram_f1(cand, ref, 2)) / 2.0
    return PairScore(value, "rouge")


def jaccard(a: str, b: str, tokenizer: Tokenizer) -> PairScore:
    """Set Jaccard over distinct token ids; two empty sets score 1.0."""
    set_a = tokenizer.token_set(a)
    set_b = tokenizer.token_set(b)
    if not set_a and not set_b:
        return PairScore(1.0, "jaccard")
    value = len(set_a & set_b) / len(set_a | set_b)
    return PairScore(value, "jaccard")


@dataclass(frozen=True)
class CorpusStats:
    """Per-batch document statistics backing BM25+ scoring."""

    doc_count: int
    avg_doc_len: float
    doc_freq: dict[int, int]
    floor_idf: float

    def idf(self, term: int, params: Bm25Params) -> float:
        n = self.doc_freq.get(term, 0)
        raw = math.log((self.doc_count - n + 0.5) / (n + 0.5))
        if raw <= 0:
            return params.epsilon * self.floor_idf
        return raw


def corpus_stats(doc_tokens: Sequence[Sequence[int]], params: Bm25Params) -> CorpusStats:
    """IDF statistics over one batch of tokenized documents.

    Non-positive raw IDFs (terms in more than half the batch) are floored
    at epsilon times the mean of the positive raw IDFs, keeping every
    term's contribution non-negative.
    """
    doc_count = len(doc_tokens)
    doc_freq: dict[int, int] = {}
    for tokens in doc_tokens:
        for term in set(tokens):
            doc_freq[term] = doc_freq.get(term, 0) + 1
    positive = [
        value
        for n in doc_freq.values()
        if (value := math.log((doc_count - n + 0.5) / (n + 0.5))) > 0
    ]
    floor = sum(positive) / len(positive) if positive else 0.0
    total_len = sum(len(tokens) for tokens in doc_tokens)
    return CorpusStats(
        doc_count=doc_count,
        avg_doc_len=total_len / doc_count if doc_count else 0.0,
        doc_freq=doc_freq,
        floor_idf=floor,
    )


def idf(term: int, stats: CorpusStats, params: Bm25Params) -> float:
    """Floored inverse document frequency for one term of the batch."""
    return stats.idf(term, params)


def bm25_raw(
    query_tokens: Sequence[int],
    doc_tokens: Sequence[Sequence[int]],
    params: Bm25Params,
    stats: CorpusStats | None = None,
) -> list[float]:
    """Raw BM25+ score of every document against one tokenized query."""
    if stats is None:
        stats = corpus_stats(doc_tokens, params)
    scores = []
    for tokens in doc_tokens:
        tf = Counter(tokens)
        doc_len = len(tokens)
        length_ratio = doc_len / stats.avg_doc_len if stats.avg_doc_len > 0 else 0.0
        norm = params.k1 * (1 - params.b + params.b * length_ratio)
        score = 0.0
        for term in query_tokens:
            freq = tf.get(term, 0)
            saturated = freq * (params.k1 + 1) / (freq + norm) if freq > 0 else 0.0
            score += stats.idf(term, params) * (saturated + params.delta)
        scores.append(score)
    return scores


def minmax_normalize(values: Sequence[float]) -> list[float]:
    """Map values onto [0, 1]; a constant batch maps every value to 0.5."""
    low, high = min(values), max(values)
    if high == low:
        return [0.5] * len(values)
    span = high - low
    return [(value - low) / span for value in values]


def bm25_batch(
    query: str,
    docs: Sequence[str],
    params: Bm25Params,
    tokenizer: Tokenizer,
) -> list[PairScore]:
    """Batch-normalized BM25+ scores of ``docs`` against ``query``."""
    if not docs:
        raise InputError("bm25_batch requires a non-empty document list")
    query_tokens = tokenizer.encode(query).tokens
    doc_tokens = [tokenizer.encode(doc).tokens for doc in docs]
    raw = bm25_raw(query_tokens, doc_tokens, params)
    return [PairScore(value, "bm25") for value in minmax_normalize(raw)]


def cosine(u: Sequence[float], v: Sequence[float]) -> PairScore:
    """Cosine similarity of two vectors; equals the dot product when both
    are unit-normalized."""
    u_arr = np.asarray(u, dtype=np.float64)
    v_arr = np.asarray(v, dtype=np.float64)
    if u_arr.shape != v_arr.shape or u_arr.ndim != 1:
        raise InputError(f"dimension mismatch: {u_arr.shape} vs {v_arr.shape}")
    norm_u = float(np.linalg.norm(u_arr))
    norm_v = float(np.linalg.norm(v_arr))
    if norm_u == 0.0 or norm_v == 0.0:
        raise NumericError("cosine is undefined for zero-norm vectors")
    return PairScore(float(np.dot(u_arr, v_arr) / (norm_u * norm_v)), "cosine")
