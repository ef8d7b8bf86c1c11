"""Task: retrieval effectiveness retention under corpus corruption.

A clean baseline NDCG@10 is computed per dataset, then the corpus is
rebuilt once per perturbation type (18 types: six text transforms plus
insertion/removal over 3 positions x 2 sizes), keeping ids and relevance
judgments.  Each type's retention is its mean NDCG@10 over the baseline's,
and the dataset score is the harmonic mean of the 18 retentions, which
punishes collapse under any single corruption.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Mapping, Sequence

from ..datasets import RetrievalDataset
from ..errors import DegenerateInputError, InputError
from ..perturb import PerturbationSpec, apply_spec, corpus_perturbations
from ..rng import derive_seed
from ..scorers import Scorer
from ..tokenization import Tokenizer


def retrieve_topk(scores: Mapping[str, float], k: int = 10) -> list[str]:
    """Document ids by descending score; ties broken by ascending id."""
    if not scores:
        raise InputError("retrieve_topk requires at least one scored document")
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return [doc_id for doc_id, _ in ranked[:k]]


def ndcg_at_k(
    ranking: Sequence[str],
    qrels_for_query: Mapping[str, int],
    k: int = 10,
    exponential: bool = False,
) -> float:
    """Discounted cumulative gain of the top k over the ideal ordering.

    Linear gain (rel / log2(i+1)) by default; the exponential form
    (2^rel - 1) coincides with it for binary relevance.
    """
    relevances = [rel for rel in qrels_for_query.values() if rel > 0]
    if not relevances:
        raise InputError("query has no relevant documents; exclude it upstream")

    def gain(rel: int) -> float:
        return (2.0**rel - 1.0) if exponential else float(rel)

    dcg = sum(
        gain(qrels_for_query.get(doc_id, 0)) / math.log2(i + 2)
        for i, doc_id in enumerate(ranking[:k])
    )
    ideal = sum(
        gain(rel) / math.log2(i + 2)
        for i, rel in enumerate(sorted(relevances, reverse=True)[:k])
    )
    return dcg / ideal


def harmonic_mean(ratios: Sequence[float]) -> float:
    """n / sum(1/x); any zero ratio collapses the mean to 0."""
    if not ratios:
        raise InputError("harmonic_mean requires at least one ratio")
    if any(r < 0 for r in ratios):
        raise InputError("ratios must be >= 0")
    if any(r == 0.0 for r in ratios):
        return 0.0
    return len(ratios) / sum(1.0 / r for r in ratios)


def build_perturbed_corpus(
    corpus: Mapping[str, Mapping[str, str]],
    spec: PerturbationSpec,
    tokenizer: Tokenizer,
    needle_source: str,
    seed: int = 0,
) -> dict[str, dict[str, str]]:
    """Replace every document's text with its perturbed version; ids and
    titles are untouched, and each document gets its own derived seed."""
    perturbed = {}
    for doc_id in corpus:
        doc_spec = dataclasses.replace(
            spec, seed=derive_seed(seed, doc_id, spec.label)
        )
        perturbed[doc_id] = {
            "title": corpus[doc_id].get("title", ""),
            "text": apply_spec(corpus[doc_id]["text"], doc_spec, tokenizer, needle_source),
        }
    return perturbed


def _doc_representation(doc: Mapping[str, str]) -> str:
    title = doc.get("title", "")
    return f"{title} {doc['text']}".strip() if title else doc["text"]


def mean_ndcg(
    scorer: Scorer,
    corpus: Mapping[str, Mapping[str, str]],
    dataset: RetrievalDataset,
    query_ids: Sequence[str],
    k: int = 10,
    exponential: bool = False,
) -> float:
    doc_ids = sorted(corpus)
    doc_texts = [_doc_representation(corpus[doc_id]) for doc_id in doc_ids]
    total = 0.0
    for query_id in query_ids:
        scores = dict(zip(doc_ids, scorer.score_batch(dataset.queries[query_id], doc_texts)))
        ranking = retrieve_topk(scores, k)
        per_query_rels = {
            doc_id: rel for (qid, doc_id), rel in dataset.qrels.items() if qid == query_id
        }
        total += ndcg_at_k(ranking, per_query_rels, k, exponential)
    return total / len(query_ids)


def run_retrieval(
    scorer: Scorer,
    dataset: RetrievalDataset,
    tokenizer: Tokenizer,
    needle_source: str,
    seed: int = 0,
    k: int = 10,
    exponential: bool = False,
) -> tuple[float, dict]:
    """Harmonic-mean retention over the 18 perturbation types.

    Queries without a relevant corpus document are excluded up front, so
    the baseline and every perturbed run see the identical query set.
    """
    query_ids = sorted(dataset.relevant_counts())
    if not query_ids:
        raise DegenerateInputError(f"dataset {dataset.name!r} has no scorable queries")
    baseline = mean_ndcg(scorer, dataset.corpus, dataset, query_ids, k, exponential)
    if baseline == 0.0:
        raise DegenerateInputError(
            f"dataset {dataset.name!r} has zero baseline NDCG@{k}"
        )
    per_type: dict[str, dict[str, float]] = {}
    retentions = []
    for spec in corpus_perturbations():
        corpus = build_perturbed_corpus(
            dataset.corpus, spec, tokenizer, needle_source, seed=seed
        )
        ndcg = mean_ndcg(scorer, corpus, dataset, query_ids, k, exponential)
        retention = ndcg / baseline
        per_type[spec.label] = {"ndcg": ndcg, "retention": retention}
        retentions.append(retention)
    score = harmonic_mean(retentions)
    return score, {
        "baseline_ndcg": baseline,
        "queries": len(query_ids),
        "types": per_type,
    }


def run_retrieval_datasets(
    scorer: Scorer,
    datasets: Mapping[str, RetrievalDataset],
    tokenizer: Tokenizer,
    needle_source: str,
    seed: int = 0,
) -> tuple[float, dict]:
    """Unweighted mean of per-dataset harmonic means; datasets with a zero
    baseline are skipped and reported.

    Individual retentions may exceed 1 (a perturbation can accidentally
    help retrieval), so the category score is capped at 1.0 to keep
    report columns in [0, 1]; raw values remain in the details.
    """
    if not datasets:
        raise InputError("run_retrieval_datasets requires at least one dataset")
    details: dict[str, dict] = {}
    scores = []
    skipped: list[str] = []
    for name, dataset in datasets.items():
        try:
            score, info = run_retrieval(scorer, dataset, tokenizer, needle_source, seed)
        except DegenerateInputError as exc:
            skipped.append(f"{name}: {exc}")
            continue
        details[name] = {"score": score, **info}
        scores.append(score)
    if not scores:
        raise DegenerateInputError("every retrieval dataset was skipped")
    category = min(1.0, sum(scores) / len(scores))
    return category, {"datasets": details, "skipped": skipped}
