"""End-to-end benchmark orchestration.

Datasets are loaded once and shared across subjects; every subject runs
the selected tasks and yields one report.  All randomness flows from the
configured seed through per-item derived seeds, and reductions are keyed
merges over sorted inputs, so two runs with the same config produce
byte-identical report documents regardless of worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

from .config import RunConfig
from .datasets import (
    load_axis_evals,
    load_clustering_sets,
    load_comparisons,
    load_pairs,
    load_retrieval,
    sample,
)
from .embeddings import EmbeddingCache, EmbeddingClient, ProviderConfig
from .errors import ConfigError
from .metrics import Bm25Params
from .perturb import load_needle_text
from .report import BenchmarkReport, build_report, run_document
from .rng import derive_seed
from .scorers import (
    Bm25Scorer,
    EmbeddingScorer,
    JaccardScorer,
    LevenshteinScorer,
    RougeScorer,
    Scorer,
)
from .tasks.clustering import run_clustering
from .tasks.human_preference import run_alignment
from .tasks.retrieval import run_retrieval_datasets
from .tasks.robustness import run_robustness
from .tasks.sensitivity import run_sensitivity
from .tokenization import load_tokenizer

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Sequence[T], jobs: int) -> list[R]:
    """Order-preserving map, threaded when jobs > 1."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _sampled(items: list, task: str, name: str, config: RunConfig) -> list:
    size = config.sample_sizes.get(task)
    if size is None:
        return items
    return sample(items, size, derive_seed(config.seed, "sample", task, name))


class BenchmarkRunner:
    def __init__(self, config: RunConfig):
        self.config = config
        self.tokenizer = load_tokenizer(config.tokenizer.vocab_path)
        self.needle_source = load_needle_text(config.perturb.needle_path)
        self.cache = EmbeddingCache(config.cache.dir)
        self.bm25_params = Bm25Params(
            k1=config.bm25.k1,
            b=config.bm25.b,
            epsilon=config.bm25.epsilon,
            delta=config.bm25.delta,
        )
        self._clients: dict[str, EmbeddingClient] = {}
        self._data: dict[str, dict] = {}
        self._load_datasets()

    def _load_datasets(self) -> None:
        config = self.config
        if "human_preference" in config.tasks:
            mapping = config.datasets["human_preference"]
            comparisons = load_comparisons(mapping["comparisons"])
            axis_evals = load_axis_evals(mapping["axis_evals"])
            self._data["human_preference"] = {
                "comparisons": _sampled(
                    comparisons, "human_preference", "comparisons", config
                ),
                "axis_evals": _sampled(
                    axis_evals, "human_preference", "axis_evals", config
                ),
            }
        if "robustness" in config.tasks:
            self._data["robustness"] = {
                name: _sampled(load_pairs(path), "robustness", name, config)
                for name, path in sorted(config.datasets["robustness"].items())
            }
        if "sensitivity" in config.tasks:
            self._data["sensitivity"] = {
                name: [
                    pair.text
                    for pair in _sampled(load_pairs(path), "sensitivity", name, config)
                ]
                for name, path in sorted(config.datasets["sensitivity"].items())
            }
        if "clustering" in config.tasks:
            self._data["clustering"] = {
                name: load_clustering_sets(path)
                for name, path in sorted(config.datasets["clustering"].items())
            }
        if "retrieval" in config.tasks:
            self._data["retrieval"] = {
                name: load_retrieval(path)
                for name, path in sorted(config.datasets["retrieval"].items())
            }

    def client_for(self, subject: str) -> EmbeddingClient:
        if subject not in self._clients:
            settings = self.config.providers[subject]
            provider_config = ProviderConfig(**settings.model_dump())
            self._clients[subject] = EmbeddingClient(
                config=provider_config, cache=self.cache, tokenizer=self.tokenizer
            )
        return self._clients[subject]

    def build_scorer(self, subject: str) -> Scorer:
        if subject == "levenshtein":
            return LevenshteinScorer()
        if subject == "rouge":
            return RougeScorer(self.tokenizer)
        if subject == "jaccard":
            return JaccardScorer(self.tokenizer)
        if subject == "bm25":
            return Bm25Scorer(self.tokenizer, self.bm25_params)
        if subject in self.config.providers:
            return EmbeddingScorer(subject, self.client_for(subject))
        raise ConfigError(f"unknown subject {subject!r}")

    def dataset_sizes(self) -> dict:
        sizes: dict[str, dict[str, int]] = {}
        for task, data in self._data.items():
            if task == "retrieval":
                sizes[task] = {
                    name: len(ds.corpus) for name, ds in data.items()
                }
            else:
                sizes[task] = {name: len(items) for name, items in data.items()}
        return sizes

    def run_subject(self, subject: str) -> BenchmarkReport:
        scorer = self.build_scorer(subject)
        seed = self.config.seed
        category_scores: dict[str, float] = {}
        details: dict[str, object] = {}
        notes: dict[str, object] = {}

        if "human_preference" in self.config.tasks:
            data = self._data["human_preference"]
            result = run_alignment(scorer, data["comparisons"], data["axis_evals"])
            category_scores["human_preference"] = result.category_score
            details["human_preference"] = {
                "comparisons": result.comparisons,
                "scoring": result.scoring,
            }
            if result.skipped_dimensions:
                notes["skipped_rating_dimensions"] = list(result.skipped_dimensions)

        if "robustness" in self.config.tasks:
            score, breakdown = run_robustness(
                scorer, self._data["robustness"], seed=seed
            )
            category_scores["robustness"] = score
            details["robustness"] = breakdown

        if "sensitivity" in self.config.tasks:
            score, breakdown = run_sensitivity(
                scorer,
                self._data["sensitivity"],
                self.tokenizer,
                self.needle_source,
            )
            category_scores["sensitivity"] = score
            details["sensitivity"] = breakdown
            notes["sensitivity_skipped_grid_points"] = breakdown["skipped_grid_points"]

        if "clustering" in self.config.tasks:
            score, breakdown = run_clustering(
                scorer,
                self._data["clustering"],
                size_cap=self.config.clustering_size_cap,
                seed=seed,
            )
            category_scores["clustering"] = score
            details["clustering"] = breakdown

        if "retrieval" in self.config.tasks:
            score, breakdown = run_retrieval_datasets(
                scorer,
                self._data["retrieval"],
                self.tokenizer,
                self.needle_source,
                seed=seed,
            )
            category_scores["retrieval"] = score
            details["retrieval"] = breakdown

        metadata = {
            "seed": seed,
            "tokenizer": self.tokenizer.name,
            "datasets": self.dataset_sizes(),
            "sample_sizes": dict(sorted(self.config.sample_sizes.items())),
            "clustering_size_cap": self.config.clustering_size_cap,
            "notes": notes,
        }
        if subject in self.config.providers:
            metadata["provider"] = {
                "provider_id": self.config.providers[subject].provider_id,
                "model_id": self.config.providers[subject].model_id,
                "dimension": self.config.providers[subject].dimension,
            }
        return build_report(subject, category_scores, metadata=metadata, details=details)

    def run(self) -> dict:
        reports = parallel_map(self.run_subject, self.config.subjects, self.config.jobs)
        return run_document(reports, self.config.seed)


def run_benchmark(config: RunConfig) -> dict:
    return BenchmarkRunner(config).run()
