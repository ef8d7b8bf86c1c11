"""Task: alignment with human preferences and quality ratings.

Two halves: predicting pairwise summary preferences from relative
similarity, and correlating similarity with four-dimensional quality
ratings.  The category score is the unweighted mean of the two halves'
means, with each correlation mapped onto [0, 1] via 0.5 * (r + 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from ..datasets import AxisEvalRecord, ComparisonRecord, RATING_KEYS
from ..errors import DegenerateInputError, InputError
from ..scorers import Scorer

COMPARISON_KEYS = ("accuracy", "precision", "recall", "f1")


@dataclass(frozen=True)
class AlignmentResult:
    comparisons: dict[str, float]
    scoring: dict[str, float]
    category_score: float
    skipped_dimensions: tuple[str, ...] = ()


def predict_preference(score_a: float, score_b: float) -> int:
    """0 when the first summary scores at least as high, else 1.

    Ties go to 0 so predictions stay deterministic.
    """
    return 1 if score_b > score_a else 0


def classification_metrics(
    predictions: Sequence[int], truths: Sequence[int]
) -> dict[str, float]:
    """Binary accuracy/precision/recall/F1 with label 0 as the positive
    class (first summary preferred); zero denominators yield 0."""
    if len(predictions) != len(truths):
        raise InputError("predictions and truths must have equal length")
    if not predictions:
        raise InputError("classification_metrics requires at least one pair")
    tp = fp = fn = correct = 0
    for pred, truth in zip(predictions, truths):
        if pred == truth:
            correct += 1
        if pred == 0 and truth == 0:
            tp += 1
        elif pred == 0 and truth == 1:
            fp += 1
        elif pred == 1 and truth == 0:
            fn += 1
    accuracy = correct / len(predictions)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (
        2 * precision * recall / (precision + recall) if precision + recall else 0.0
    )
    return {"accuracy": accuracy, "precision": precision, "recall": recall, "f1": f1}


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation; zero variance raises DegenerateInputError."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise InputError("pearson requires two equal-length sequences of >= 2 values")
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    var_x = sum((x - mean_x) ** 2 for x in xs)
    var_y = sum((y - mean_y) ** 2 for y in ys)
    if var_x == 0.0 or var_y == 0.0:
        raise DegenerateInputError("pearson is undefined for zero-variance input")
    cov = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    return cov / math.sqrt(var_x * var_y)


def normalize_correlation(r: float) -> float:
    """Map a correlation in [-1, 1] onto [0, 1]."""
    if not -1.0 - 1e-9 <= r <= 1.0 + 1e-9:
        raise InputError("correlation must lie in [-1, 1]")
    return 0.5 * (min(max(r, -1.0), 1.0) + 1.0)


def run_alignment(
    scorer: Scorer,
    comparisons: Sequence[ComparisonRecord],
    axis_evals: Sequence[AxisEvalRecord],
) -> AlignmentResult:
    if not comparisons or not axis_evals:
        raise InputError("alignment needs both comparison and rating records")

    predictions = []
    for record in comparisons:
        score_a, score_b = scorer.score_batch(
            record.post, [record.summary_a, record.summary_b]
        )
        predictions.append(predict_preference(score_a, score_b))
    truths = [record.choice for record in comparisons]
    comparison_scores = classification_metrics(predictions, truths)

    similarities = scorer.score_pairs(
        [(record.text, record.summary) for record in axis_evals]
    )
    scoring: dict[str, float] = {}
    skipped: list[str] = []
    for key in RATING_KEYS:
        ratings = [float(record.ratings[key]) for record in axis_evals]
        try:
            scoring[key] = normalize_correlation(pearson(similarities, ratings))
        except DegenerateInputError:
            skipped.append(key)

    comparison_mean = sum(comparison_scores.values()) / len(comparison_scores)
    if scoring:
        scoring_mean = sum(scoring.values()) / len(scoring)
        category = (comparison_mean + scoring_mean) / 2.0
    else:
        category = comparison_mean
    return AlignmentResult(
        comparisons=comparison_scores,
        scoring=scoring,
        category_score=category,
        skipped_dimensions=tuple(skipped),
    )
