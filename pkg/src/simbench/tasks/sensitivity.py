"""Task: calibration of similarity decay against controlled degradation.

Documents are degraded by filler insertion and token removal over fixed
(proportion, position) grids; a metric is scored on how closely its
observed similarities track the theoretical curve 1 - p/(1+p), via
1 minus the mean absolute error.  The category score is the mean of the
insertion-side and removal-side dataset means.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ..errors import InputError
from ..perturb import insert_needle, remove_tokens
from ..scorers import Scorer
from ..tokenization import Tokenizer

INSERTION_GRID = tuple(
    (proportion, position)
    for proportion in (0.15, 0.5, 1.0)
    for position in (0.0, 0.5, 1.0)
)
REMOVAL_GRID = tuple(
    (proportion, position)
    for proportion in (0.15, 0.5, 0.9)
    for position in (0.0, 0.5, 1.0)
)
# Below this many tokens, removing 90% leaves near-empty text whose
# similarity is noise; those grid points are skipped and counted.
MIN_TOKENS_FOR_HEAVY_REMOVAL = 20


@dataclass(frozen=True)
class GridPoint:
    proportion: float
    position: float
    observed: float
    theoretical: float


@dataclass(frozen=True)
class SensitivityGrid:
    kind: str  # "insertion" | "removal"
    points: tuple[GridPoint, ...]


def theoretical_similarity(p: float) -> float:
    """Expected similarity after perturbing proportion p: 1 - p/(1+p)."""
    if p < 0:
        raise InputError("proportion must be >= 0")
    return 1.0 - p / (1.0 + p)


def sensitivity_score(grid: SensitivityGrid) -> float:
    """1 - MAE(observed, theoretical), clamped into [0, 1] since cosine
    observations may leave the unit interval."""
    if not grid.points:
        raise InputError("sensitivity_score requires a non-empty grid")
    mae = sum(abs(p.observed - p.theoretical) for p in grid.points) / len(grid.points)
    return min(1.0, max(0.0, 1.0 - mae))


def document_grid(
    scorer: Scorer,
    text: str,
    kind: str,
    tokenizer: Tokenizer,
    needle_source: str,
) -> SensitivityGrid | None:
    """Perturb one document over its grid and collect observed scores.

    The unperturbed document rides along at the end of the score batch so
    batch-relative metrics see an anchor; its score is discarded.
    Returns None when every point of the grid is skipped.
    """
    if kind == "insertion":
        grid = INSERTION_GRID
    elif kind == "removal":
        grid = REMOVAL_GRID
    else:
        raise InputError(f"unknown sensitivity kind {kind!r}")

    token_count = len(tokenizer.encode(text).tokens)
    cells = []
    for proportion, position in grid:
        if (
            kind == "removal"
            and proportion == 0.9
            and token_count < MIN_TOKENS_FOR_HEAVY_REMOVAL
        ):
            continue
        if kind == "insertion":
            variant = insert_needle(text, proportion, position, tokenizer, needle_source)
        else:
            variant = remove_tokens(text, proportion, position, tokenizer)
        cells.append((proportion, position, variant))
    if not cells:
        return None
    observed = scorer.score_batch(text, [variant for _, _, variant in cells] + [text])
    points = tuple(
        GridPoint(
            proportion=proportion,
            position=position,
            observed=observed[i],
            theoretical=theoretical_similarity(proportion),
        )
        for i, (proportion, position, _) in enumerate(cells)
    )
    return SensitivityGrid(kind=kind, points=points)


def run_sensitivity(
    scorer: Scorer,
    datasets: Mapping[str, Sequence[str]],
    tokenizer: Tokenizer,
    needle_source: str,
) -> tuple[float, dict]:
    """Category score plus per-dataset insertion/removal means.

    Documents too short for the heaviest removal contribute their other
    grid points; the number of skipped grid points is reported.
    """
    if not datasets:
        raise InputError("run_sensitivity requires at least one dataset")
    details: dict[str, dict[str, float]] = {}
    skipped_points: dict[str, int] = {}
    for name, texts in datasets.items():
        if not texts:
            raise InputError(f"dataset {name!r} has no documents")
        kind_means: dict[str, float] = {}
        skipped = 0
        for kind, grid_size in (("insertion", len(INSERTION_GRID)), ("removal", len(REMOVAL_GRID))):
            scores = []
            for text in texts:
                grid = document_grid(scorer, text, kind, tokenizer, needle_source)
                if grid is None:
                    skipped += grid_size
                    continue
                skipped += grid_size - len(grid.points)
                scores.append(sensitivity_score(grid))
            if not scores:
                raise InputError(f"dataset {name!r} has no usable documents for {kind}")
            kind_means[kind] = sum(scores) / len(scores)
        details[name] = kind_means
        skipped_points[name] = skipped
    insertion_mean = sum(d["insertion"] for d in details.values()) / len(details)
    removal_mean = sum(d["removal"] for d in details.values()) / len(details)
    category = (insertion_mean + removal_mean) / 2.0
    return category, {
        "datasets": details,
        "insertion_mean": insertion_mean,
        "removal_mean": removal_mean,
        "skipped_grid_points": skipped_points,
    }
