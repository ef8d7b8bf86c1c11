"""The five evaluation task categories."""

CATEGORIES = (
    "clustering",
    "human_preference",
    "robustness",
    "sensitivity",
    "retrieval",
)
