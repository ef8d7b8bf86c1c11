"""Task: ordinal consistency under surface vs. meaning-altering edits.

For each document we compare similarities against its three superficial
variants, its three semantic variants, and its summary, and check three
strict ordinal conditions.  A dataset's score is the mean over the three
per-condition pass fractions, and the category score averages datasets.
Ties count as failures; only score order matters, so any strictly
monotone rescaling of a metric leaves the outcome unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ..datasets import DocumentSummaryPair
from ..errors import InputError
from ..perturb import (
    char_prune,
    numerize,
    random_capitalization,
    shuffle_sentences,
    shuffle_words,
    toggle_negation,
)
from ..rng import derive_seed
from ..scorers import Scorer

CONDITIONS = (
    "summary_over_semantic",
    "superficial_over_summary",
    "superficial_over_semantic",
)


@dataclass(frozen=True)
class RobustnessOutcome:
    summary_over_semantic: bool
    superficial_over_summary: bool
    superficial_over_semantic: bool

    def as_dict(self) -> dict[str, bool]:
        return {
            "summary_over_semantic": self.summary_over_semantic,
            "superficial_over_summary": self.superficial_over_summary,
            "superficial_over_semantic": self.superficial_over_semantic,
        }


def pair_variants(original: str, seed: int, pair_id: str) -> tuple[list[str], list[str]]:
    """The three superficial and three semantic variants of one document;
    each randomized transform gets its own (seed, pair, kind) stream."""
    superficial = [
        random_capitalization(original, seed=derive_seed(seed, pair_id, "random_caps")),
        char_prune(original),
        numerize(original),
    ]
    semantic = [
        toggle_negation(original),
        shuffle_sentences(original, seed=derive_seed(seed, pair_id, "sentence_shuffle")),
        shuffle_words(original, seed=derive_seed(seed, pair_id, "word_shuffle")),
    ]
    return superficial, semantic


def outcome_from_scores(
    superficial: Sequence[float], semantic: Sequence[float], summary: float
) -> RobustnessOutcome:
    return RobustnessOutcome(
        summary_over_semantic=all(summary > s for s in semantic),
        superficial_over_summary=all(s > summary for s in superficial),
        superficial_over_semantic=min(superficial) > max(semantic),
    )


def evaluate_pair(
    scorer: Scorer,
    original: str,
    summary: str,
    seed: int = 0,
    pair_id: str = "",
) -> RobustnessOutcome:
    if not original or not summary:
        raise InputError("evaluate_pair requires non-empty texts")
    superficial, semantic = pair_variants(original, seed, pair_id)
    scores = scorer.score_batch(original, [*superficial, *semantic, summary])
    return outcome_from_scores(scores[0:3], scores[3:6], scores[6])


def dataset_score(outcomes: Sequence[RobustnessOutcome]) -> dict[str, float]:
    """Per-condition pass fractions plus their mean."""
    if not outcomes:
        raise InputError("dataset_score requires at least one outcome")
    fractions = {
        name: sum(1 for o in outcomes if getattr(o, name)) / len(outcomes)
        for name in CONDITIONS
    }
    fractions["score"] = sum(fractions[name] for name in CONDITIONS) / len(CONDITIONS)
    fractions["all_three"] = (
        sum(1 for o in outcomes if all(o.as_dict().values())) / len(outcomes)
    )
    return fractions


def run_robustness(
    scorer: Scorer,
    datasets: Mapping[str, Sequence[DocumentSummaryPair]],
    seed: int = 0,
) -> tuple[float, dict[str, dict[str, float]]]:
    """Category score (mean over datasets) and per-dataset breakdown.

    ``all_three`` (the fraction where every condition holds at once) is
    reported alongside the score for reference; the score itself averages
    the three per-condition fractions.
    """
    if not datasets:
        raise InputError("run_robustness requires at least one dataset")
    details: dict[str, dict[str, float]] = {}
    for name, pairs in datasets.items():
        if not pairs:
            raise InputError(f"dataset {name!r} has no pairs")
        outcomes = [
            evaluate_pair(scorer, pair.text, pair.summary, seed=seed, pair_id=pair.id)
            for pair in pairs
        ]
        details[name] = dataset_score(outcomes)
    category = sum(d["score"] for d in details.values()) / len(details)
    return category, details
