"""Score aggregation and report serialization.

The overall score for a subject is the unweighted mean of exactly its
five category scores; partial runs keep their category scores but carry
no overall, so an incomplete run can never masquerade as a full one.
Stored JSON is canonical (sorted keys, fixed indentation, no timestamps)
and keeps full float precision; rounding to three decimals happens only
in the human-readable table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import InputError
from .tasks import CATEGORIES

SCHEMA_VERSION = 1

_TABLE_COLUMNS = (
    ("clustering", "Clustering"),
    ("human_preference", "Human Pref."),
    ("robustness", "Robustness"),
    ("sensitivity", "Sensitivity"),
    ("retrieval", "Retrieval"),
)


@dataclass(frozen=True)
class BenchmarkReport:
    subject_id: str
    category_scores: dict[str, float]
    overall: float | None
    metadata: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        doc = {
            "subject_id": self.subject_id,
            "category_scores": dict(self.category_scores),
            "overall": self.overall,
            "metadata": self.metadata,
            "details": self.details,
        }
        return doc


def aggregate(category_scores: Mapping[str, float]) -> float:
    """Unweighted mean of the five category scores."""
    missing = [c for c in CATEGORIES if c not in category_scores]
    extra = [c for c in category_scores if c not in CATEGORIES]
    if missing or extra:
        raise InputError(
            f"aggregate needs exactly the five categories; missing={missing}, unknown={extra}"
        )
    return sum(category_scores[c] for c in CATEGORIES) / len(CATEGORIES)


def build_report(
    subject_id: str,
    category_scores: Mapping[str, float],
    metadata: Mapping | None = None,
    details: Mapping | None = None,
) -> BenchmarkReport:
    overall = (
        aggregate(category_scores)
        if all(c in category_scores for c in CATEGORIES)
        else None
    )
    return BenchmarkReport(
        subject_id=subject_id,
        category_scores=dict(category_scores),
        overall=overall,
        metadata=dict(metadata or {}),
        details=dict(details or {}),
    )


def run_document(reports: Sequence[BenchmarkReport], seed: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "reports": [report.as_dict() for report in reports],
    }


def render_json(document: Mapping) -> bytes:
    """Canonical serialization: sorted keys, two-space indent, newline-
    terminated.  Identical inputs always produce identical bytes."""
    return (
        json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    ).encode("utf-8")


def _fmt(score: float | None) -> str:
    return f"{score:.3f}" if score is not None else "-"


def render_table(document: Mapping) -> str:
    """Aligned text table: one row per subject, five category columns
    plus the overall mean."""
    headers = ["Subject"] + [label for _, label in _TABLE_COLUMNS] + ["Overall"]
    rows = []
    for report in document.get("reports", []):
        scores = report.get("category_scores", {})
        rows.append(
            [report.get("subject_id", "?")]
            + [_fmt(scores.get(key)) for key, _ in _TABLE_COLUMNS]
            + [_fmt(report.get("overall"))]
        )
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in rows)) if rows else len(headers[i])
        for i in range(len(headers))
    ]
    lines = [
        "  ".join(header.ljust(widths[i]) for i, header in enumerate(headers)),
        "  ".join("-" * widths[i] for i in range(len(headers))),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines) + "\n"


def emit_report(document: Mapping, format: str) -> bytes:
    """Serialize a run document as canonical JSON or an aligned table."""
    if format == "json":
        return render_json(document)
    if format == "table":
        return render_table(document).encode("utf-8")
    raise InputError(f"unknown report format {format!r}")
