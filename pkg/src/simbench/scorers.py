"""Uniform scoring interface over classical metrics and embedding models.

Every task consumes a :class:`Scorer` through two methods:

* ``score_batch(query, docs)`` — one query against a group of documents.
  For batch-relative BM25+ this is the natural unit: scores are min-max
  normalized within the group, which leaves ordinal comparisons intact.
* ``score_pairs(pairs)`` — independent (query, doc) pairs spread across a
  dataset.  Pairwise metrics score each pair in isolation; BM25+ builds
  corpus statistics over all documents of the call and normalizes the raw
  scores across the whole list so the values carry variance.

The query plays the reference role throughout (source text, original
document, retrieval query); the doc plays the candidate role.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .embeddings import EmbeddingClient
from .errors import InputError
from .metrics import (
    Bm25Params,
    bm25_raw,
    corpus_stats,
    jaccard,
    levenshtein_ratio,
    minmax_normalize,
    rouge_avg_f,
)
from .tokenization import Tokenizer


class Scorer:
    name: str = "base"
    kind: str = "classical"

    def score_one(self, query: str, doc: str) -> float:
        raise NotImplementedError

    def score_batch(self, query: str, docs: Sequence[str]) -> list[float]:
        if not docs:
            raise InputError("score_batch requires at least one document")
        return [self.score_one(query, doc) for doc in docs]

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        return [self.score_one(query, doc) for query, doc in pairs]


class LevenshteinScorer(Scorer):
    name = "levenshtein"

    def score_one(self, query: str, doc: str) -> float:
        return levenshtein_ratio(query, doc).value


class RougeScorer(Scorer):
    name = "rouge"

    def __init__(self, tokenizer: Tokenizer):
        self.tokenizer = tokenizer

    def score_one(self, query: str, doc: str) -> float:
        return rouge_avg_f(doc, query, self.tokenizer).value


class JaccardScorer(Scorer):
    name = "jaccard"

    def __init__(self, tokenizer: Tokenizer):
        self.tokenizer = tokenizer

    def score_one(self, query: str, doc: str) -> float:
        return jaccard(query, doc, self.tokenizer).value


class Bm25Scorer(Scorer):
    name = "bm25"
    kind = "bm25"

    def __init__(self, tokenizer: Tokenizer, params: Bm25Params | None = None):
        self.tokenizer = tokenizer
        self.params = params or Bm25Params()

    def score_one(self, query: str, doc: str) -> float:
        # A single-document batch is degenerate by construction (0.5);
        # callers needing meaningful values must use batch or pairs form.
        return self.score_batch(query, [doc])[0]

    def score_batch(self, query: str, docs: Sequence[str]) -> list[float]:
        if not docs:
            raise InputError("score_batch requires at least one document")
        query_tokens = self.tokenizer.encode(query).tokens
        doc_tokens = [self.tokenizer.encode(doc).tokens for doc in docs]
        return minmax_normalize(bm25_raw(query_tokens, doc_tokens, self.params))

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        doc_tokens = [self.tokenizer.encode(doc).tokens for _, doc in pairs]
        stats = corpus_stats(doc_tokens, self.params)
        raw = [
            bm25_raw(self.tokenizer.encode(query).tokens, [tokens], self.params, stats)[0]
            for (query, _), tokens in zip(pairs, doc_tokens)
        ]
        return minmax_normalize(raw)


class EmbeddingScorer(Scorer):
    """Cosine similarity over provider embeddings, unit-normalized."""

    kind = "embedding"

    def __init__(self, name: str, client: EmbeddingClient):
        self.name = name
        self.client = client

    def unit_matrix(self, texts: Sequence[str]) -> np.ndarray:
        vectors = self.client.embed_batch(list(texts))
        matrix = np.asarray([v.values for v in vectors], dtype=np.float64)
        norms = np.linalg.norm(matrix, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        return matrix / norms

    def score_one(self, query: str, doc: str) -> float:
        matrix = self.unit_matrix([query, doc])
        return float(matrix[0] @ matrix[1])

    def score_batch(self, query: str, docs: Sequence[str]) -> list[float]:
        if not docs:
            raise InputError("score_batch requires at least one document")
        matrix = self.unit_matrix([query, *docs])
        return [float(x) for x in matrix[1:] @ matrix[0]]

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        unique: list[str] = []
        index: dict[str, int] = {}
        for query, doc in pairs:
            for text in (query, doc):
                if text not in index:
                    index[text] = len(unique)
                    unique.append(text)
        matrix = self.unit_matrix(unique)
        return [
            float(matrix[index[query]] @ matrix[index[doc]]) for query, doc in pairs
        ]
