"""Task: categorical structure recovery via complete-linkage clustering.

Each metric induces its own distance matrix (1 - similarity; embeddings
use 1 minus the dot product of unit vectors; the query-asymmetric BM25
matrix is symmetrized by averaging with its transpose).  Items are merged
bottom-up under complete linkage down to the ground-truth cluster count
and scored with the V-measure, using natural-log entropies.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Mapping, Sequence

import numpy as np

from ..datasets import ClusteringSet
from ..errors import InputError
from ..rng import Rng, derive_seed
from ..scorers import Scorer


def distance_matrix(texts: Sequence[str], scorer: Scorer) -> np.ndarray:
    """Symmetric n x n distances in [0, 1] with a zero diagonal."""
    n = len(texts)
    if n < 2:
        raise InputError("distance_matrix requires at least 2 texts")
    if scorer.kind == "embedding":
        unit = scorer.unit_matrix(texts)
        dist = 1.0 - unit @ unit.T
    elif scorer.kind == "bm25":
        rows = np.asarray([scorer.score_batch(text, texts) for text in texts])
        dist = 1.0 - (rows + rows.T) / 2.0
    else:
        dist = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                d = 1.0 - scorer.score_one(texts[i], texts[j])
                dist[i, j] = d
                dist[j, i] = d
    dist = np.clip((dist + dist.T) / 2.0, 0.0, 1.0)
    np.fill_diagonal(dist, 0.0)
    return dist


def agglomerative_complete(dist: np.ndarray, k: int) -> list[int]:
    """Bottom-up complete-linkage clustering stopped at k clusters.

    The closest pair is merged each step; the merged cluster's distance to
    the rest is the maximum of its parts' distances.  Ties are broken by
    the lexicographically smallest index pair so results do not depend on
    floating-point argmin quirks.  Returned labels are 0..k-1, numbered by
    each cluster's smallest member index.
    """
    n = dist.shape[0]
    if dist.shape != (n, n):
        raise InputError("distance matrix must be square")
    if not 1 <= k <= n:
        raise InputError(f"cluster count {k} out of range [1, {n}]")
    work = dist.astype(np.float64).copy()
    np.fill_diagonal(work, np.inf)
    members: dict[int, list[int]] = {i: [i] for i in range(n)}
    for _ in range(n - k):
        flat = int(np.argmin(work))  # row-major first minimum = smallest (i, j)
        i, j = divmod(flat, n)
        if i > j:
            i, j = j, i
        merged = np.maximum(work[i], work[j])
        work[i, :] = merged
        work[:, i] = merged
        work[i, i] = np.inf
        work[j, :] = np.inf
        work[:, j] = np.inf
        members[i].extend(members.pop(j))
    labels = [0] * n
    for label, (_, items) in enumerate(
        sorted(members.items(), key=lambda kv: min(kv[1]))
    ):
        for item in items:
            labels[item] = label
    return labels


def _entropy(counts: Counter) -> float:
    total = sum(counts.values())
    return -sum(
        (count / total) * math.log(count / total) for count in counts.values() if count
    )


def v_measure(predicted_labels: Sequence, true_labels: Sequence) -> float:
    """Harmonic mean of homogeneity and completeness (natural-log entropy).

    Degenerate conventions: a zero-entropy class (or cluster) distribution
    makes homogeneity (or completeness) 1; if both terms are 0 the measure
    is 0.  Invariant under any renaming of either label set.
    """
    if len(predicted_labels) != len(true_labels):
        raise InputError("label sequences must have equal length")
    n = len(true_labels)
    if n == 0:
        raise InputError("v_measure requires at least one item")
    class_counts = Counter(true_labels)
    cluster_counts = Counter(predicted_labels)
    joint = Counter(zip(true_labels, predicted_labels))

    h_class = _entropy(class_counts)
    h_cluster = _entropy(cluster_counts)
    h_class_given_cluster = -sum(
        (count / n) * math.log(count / cluster_counts[pred])
        for (_, pred), count in joint.items()
    )
    h_cluster_given_class = -sum(
        (count / n) * math.log(count / class_counts[true])
        for (true, _), count in joint.items()
    )
    homogeneity = 1.0 if h_class == 0.0 else 1.0 - h_class_given_cluster / h_class
    completeness = 1.0 if h_cluster == 0.0 else 1.0 - h_cluster_given_class / h_cluster
    if homogeneity + completeness == 0.0:
        return 0.0
    return 2.0 * homogeneity * completeness / (homogeneity + completeness)


def cluster_set(
    scorer: Scorer, item: ClusteringSet, size_cap: int, seed: int
) -> tuple[float, bool]:
    """V-measure for one labeled set; oversized sets are subsampled with a
    seeded draw (reported via the returned flag)."""
    texts, labels = list(item.texts), list(item.labels)
    subsampled = False
    if size_cap and len(texts) > size_cap:
        rng = Rng(derive_seed(seed, "clustering-cap", item.set_id))
        keep = sorted(rng.sample_indices(len(texts), size_cap))
        texts = [texts[i] for i in keep]
        labels = [labels[i] for i in keep]
        subsampled = True
    k = len(set(labels))
    if k < 2 or len(texts) < 2:
        raise InputError(f"set {item.set_id!r} is degenerate after capping")
    predicted = agglomerative_complete(distance_matrix(texts, scorer), k)
    return v_measure(predicted, labels), subsampled


def run_clustering(
    scorer: Scorer,
    datasets: Mapping[str, Sequence[ClusteringSet]],
    size_cap: int = 2000,
    seed: int = 0,
) -> tuple[float, dict]:
    if not datasets:
        raise InputError("run_clustering requires at least one dataset")
    details: dict[str, dict] = {}
    for name, sets in datasets.items():
        if not sets:
            raise InputError(f"dataset {name!r} has no sets")
        per_set: dict[str, float] = {}
        capped = 0
        for item in sets:
            score, subsampled = cluster_set(scorer, item, size_cap, seed)
            per_set[item.set_id] = score
            capped += int(subsampled)
        details[name] = {
            "sets": per_set,
            "score": sum(per_set.values()) / len(per_set),
            "subsampled_sets": capped,
        }
    category = sum(d["score"] for d in details.values()) / len(details)
    return category, details
