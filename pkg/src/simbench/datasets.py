"""Dataset loading and validation.

All tabular inputs are JSON-lines (one UTF-8 object per line); retrieval
data follows the common {corpus, queries, qrels} directory layout with a
tab-separated qrels file.  Loading is fail-fast: the first malformed
record aborts with its line number and field, and referential integrity
of qrels is enforced here so downstream task code never has to.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, TypeVar

from .errors import DatasetFormatError
from .rng import Rng

RATING_KEYS = ("overall", "accuracy", "coverage", "coherence")

T = TypeVar("T")


@dataclass(frozen=True)
class DocumentSummaryPair:
    id: str
    text: str
    summary: str


@dataclass(frozen=True)
class ComparisonRecord:
    id: str
    post: str
    summary_a: str
    summary_b: str
    choice: int


@dataclass(frozen=True)
class AxisEvalRecord:
    id: str
    text: str
    summary: str
    ratings: dict[str, int]


@dataclass(frozen=True)
class ClusteringSet:
    set_id: str
    texts: tuple[str, ...]
    labels: tuple[str, ...]

    @property
    def k(self) -> int:
        return len(set(self.labels))


@dataclass(frozen=True)
class RetrievalDataset:
    corpus: dict[str, dict[str, str]]
    queries: dict[str, str]
    qrels: dict[tuple[str, str], int]
    name: str = "retrieval"

    def relevant_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for (query_id, _), relevance in self.qrels.items():
            if relevance > 0:
                counts[query_id] = counts.get(query_id, 0) + 1
        return counts


def _iter_jsonl(path: str | Path):
    path = Path(path)
    if not path.exists():
        raise DatasetFormatError(str(path), None, "file not found")
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetFormatError(str(path), lineno, f"invalid JSON: {exc.msg}")
            if not isinstance(record, dict):
                raise DatasetFormatError(str(path), lineno, "record is not an object")
            yield lineno, record


def _require(record: dict, key: str, path: str, lineno: int):
    if key not in record:
        raise DatasetFormatError(path, lineno, f"missing field {key!r}")
    return record[key]


def _require_text(record: dict, key: str, path: str, lineno: int) -> str:
    value = _require(record, key, path, lineno)
    if not isinstance(value, str) or not value:
        raise DatasetFormatError(path, lineno, f"field {key!r} must be a non-empty string")
    return value


def load_pairs(path: str | Path) -> list[DocumentSummaryPair]:
    pairs = []
    for lineno, record in _iter_jsonl(path):
        pairs.append(
            DocumentSummaryPair(
                id=_require_text(record, "id", str(path), lineno),
                text=_require_text(record, "text", str(path), lineno),
                summary=_require_text(record, "summary", str(path), lineno),
            )
        )
    return pairs


def load_comparisons(path: str | Path) -> list[ComparisonRecord]:
    records = []
    for lineno, record in _iter_jsonl(path):
        choice = _require(record, "choice", str(path), lineno)
        if choice not in (0, 1):
            raise DatasetFormatError(str(path), lineno, "field 'choice' must be 0 or 1")
        records.append(
            ComparisonRecord(
                id=_require_text(record, "id", str(path), lineno),
                post=_require_text(record, "post", str(path), lineno),
                summary_a=_require_text(record, "summary_a", str(path), lineno),
                summary_b=_require_text(record, "summary_b", str(path), lineno),
                choice=int(choice),
            )
        )
    return records


def load_axis_evals(path: str | Path) -> list[AxisEvalRecord]:
    records = []
    for lineno, record in _iter_jsonl(path):
        ratings = _require(record, "ratings", str(path), lineno)
        if not isinstance(ratings, dict):
            raise DatasetFormatError(str(path), lineno, "field 'ratings' must be an object")
        parsed: dict[str, int] = {}
        for key in RATING_KEYS:
            if key not in ratings:
                raise DatasetFormatError(str(path), lineno, f"ratings missing {key!r}")
            value = ratings[key]
            if not isinstance(value, int) or not 1 <= value <= 7:
                raise DatasetFormatError(
                    str(path), lineno, f"rating {key!r} must be an integer in [1, 7]"
                )
            parsed[key] = value
        records.append(
            AxisEvalRecord(
                id=_require_text(record, "id", str(path), lineno),
                text=_require_text(record, "text", str(path), lineno),
                summary=_require_text(record, "summary", str(path), lineno),
                ratings=parsed,
            )
        )
    return records


def load_clustering_sets(path: str | Path) -> list[ClusteringSet]:
    sets = []
    for lineno, record in _iter_jsonl(path):
        texts = _require(record, "texts", str(path), lineno)
        labels = _require(record, "labels", str(path), lineno)
        if not isinstance(texts, list) or not all(isinstance(t, str) and t for t in texts):
            raise DatasetFormatError(
                str(path), lineno, "field 'texts' must be a list of non-empty strings"
            )
        if not isinstance(labels, list) or not all(isinstance(l, str) for l in labels):
            raise DatasetFormatError(str(path), lineno, "field 'labels' must be a list of strings")
        if len(texts) != len(labels):
            raise DatasetFormatError(str(path), lineno, "'texts' and 'labels' lengths differ")
        distinct = len(set(labels))
        if distinct < 2:
            raise DatasetFormatError(str(path), lineno, "need at least 2 distinct labels")
        if "k" in record and record["k"] != distinct:
            raise DatasetFormatError(
                str(path), lineno, f"field 'k'={record['k']} != distinct label count {distinct}"
            )
        sets.append(
            ClusteringSet(
                set_id=_require_text(record, "set_id", str(path), lineno),
                texts=tuple(texts),
                labels=tuple(labels),
            )
        )
    return sets


def load_retrieval(directory: str | Path) -> RetrievalDataset:
    directory = Path(directory)
    corpus_path = directory / "corpus.jsonl"
    queries_path = directory / "queries.jsonl"
    qrels_path = directory / "qrels.tsv"
    if not qrels_path.exists():
        qrels_path = directory / "qrels" / "test.tsv"

    corpus: dict[str, dict[str, str]] = {}
    for lineno, record in _iter_jsonl(corpus_path):
        doc_id = _require_text(record, "_id", str(corpus_path), lineno)
        corpus[doc_id] = {
            "title": record.get("title", "") or "",
            "text": _require_text(record, "text", str(corpus_path), lineno),
        }

    queries: dict[str, str] = {}
    for lineno, record in _iter_jsonl(queries_path):
        query_id = _require_text(record, "_id", str(queries_path), lineno)
        queries[query_id] = _require_text(record, "text", str(queries_path), lineno)

    if not qrels_path.exists():
        raise DatasetFormatError(str(qrels_path), None, "file not found")
    qrels: dict[tuple[str, str], int] = {}
    lines = qrels_path.read_text("utf-8").splitlines()
    for lineno, line in enumerate(lines, 1):
        if lineno == 1 or not line.strip():
            continue  # header line
        parts = line.split("\t")
        if len(parts) != 3:
            raise DatasetFormatError(
                str(qrels_path), lineno, "expected 3 tab-separated columns"
            )
        query_id, doc_id, score_text = parts
        try:
            relevance = int(score_text)
        except ValueError:
            raise DatasetFormatError(str(qrels_path), lineno, "score must be an integer")
        if relevance < 0:
            raise DatasetFormatError(str(qrels_path), lineno, "score must be >= 0")
        if doc_id not in corpus:
            raise DatasetFormatError(
                str(qrels_path), lineno, f"unknown corpus id {doc_id!r}"
            )
        if query_id not in queries:
            raise DatasetFormatError(
                str(qrels_path), lineno, f"unknown query id {query_id!r}"
            )
        qrels[(query_id, doc_id)] = relevance
    return RetrievalDataset(corpus=corpus, queries=queries, qrels=qrels, name=directory.name)


def sample(items: Sequence[T], n: int, seed: int) -> list[T]:
    """Deterministic sample of n items without replacement.

    Asking for at least the full population returns every item in its
    original order.
    """
    if n < 1:
        raise DatasetFormatError("<sample>", None, "sample size must be >= 1")
    if n >= len(items):
        return list(items)
    indices = Rng(seed).sample_indices(len(items), n)
    return [items[i] for i in indices]
