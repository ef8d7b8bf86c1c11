"""FastAPI application wrapping the benchmark core.

The service is stateless between requests; persistence lives in the
on-disk embedding cache named by each run config.  Dataset paths inside a
run config refer to the service host's filesystem.
"""

from __future__ import annotations

import time
from datetime import datetime, timezone

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..config import validate_config
from ..errors import ConfigError, InputError, SimbenchError
from ..metrics import CLASSICAL_METRICS
from ..perturb import (
    PerturbationSpec,
    apply_spec,
    load_needle_text,
    random_capitalization,
)
from ..report import emit_report
from ..runner import BenchmarkRunner
from ..tokenization import load_tokenizer
from . import schemas


def create_app() -> FastAPI:
    app = FastAPI(title="simbench", version=__version__)

    @app.exception_handler(SimbenchError)
    async def _domain_error(request: Request, exc: SimbenchError) -> JSONResponse:
        status = 400 if isinstance(exc, (InputError, ConfigError)) else 422
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/perturb", response_model=schemas.PerturbResponse)
    def perturb(request: schemas.PerturbRequest) -> schemas.PerturbResponse:
        tokenizer = load_tokenizer(request.vocab_path)
        if request.kind == "random_caps":
            text = random_capitalization(
                request.text, fraction=request.fraction, seed=request.seed
            )
        else:
            spec = PerturbationSpec(
                kind=request.kind,
                position=request.position,
                proportion=request.proportion,
                seed=request.seed,
            )
            needle = load_needle_text(request.needle_path)
            text = apply_spec(request.text, spec, tokenizer, needle)
        return schemas.PerturbResponse(text=text, kind=request.kind)

    def _scorer(metric: str, vocab_path: str | None):
        if metric not in CLASSICAL_METRICS:
            raise InputError(
                f"metric must be one of {', '.join(CLASSICAL_METRICS)}; "
                "embedding subjects are scored through /benchmark/run"
            )
        from ..metrics import Bm25Params
        from ..scorers import Bm25Scorer, JaccardScorer, LevenshteinScorer, RougeScorer

        tokenizer = load_tokenizer(vocab_path)
        return {
            "levenshtein": lambda: LevenshteinScorer(),
            "rouge": lambda: RougeScorer(tokenizer),
            "jaccard": lambda: JaccardScorer(tokenizer),
            "bm25": lambda: Bm25Scorer(tokenizer, Bm25Params()),
        }[metric]()

    @app.post("/similarity/pair", response_model=schemas.PairSimilarityResponse)
    def similarity_pair(
        request: schemas.PairSimilarityRequest,
    ) -> schemas.PairSimilarityResponse:
        scorer = _scorer(request.metric, request.vocab_path)
        return schemas.PairSimilarityResponse(
            metric=request.metric, score=scorer.score_one(request.a, request.b)
        )

    @app.post("/similarity/batch", response_model=schemas.BatchSimilarityResponse)
    def similarity_batch(
        request: schemas.BatchSimilarityRequest,
    ) -> schemas.BatchSimilarityResponse:
        scorer = _scorer(request.metric, request.vocab_path)
        return schemas.BatchSimilarityResponse(
            metric=request.metric,
            scores=scorer.score_batch(request.query, request.docs),
        )

    @app.post("/benchmark/run", response_model=schemas.RunResponse)
    def benchmark_run(request: schemas.RunRequest) -> schemas.RunResponse:
        validate_config(request.config)
        started = time.monotonic()
        started_at = datetime.now(timezone.utc).isoformat()
        report = BenchmarkRunner(request.config).run()
        meta = {
            "started_at": started_at,
            "finished_at": datetime.now(timezone.utc).isoformat(),
            "duration_seconds": time.monotonic() - started,
        }
        return schemas.RunResponse(report=report, meta=meta)

    @app.post("/report/render", response_model=schemas.RenderResponse)
    def report_render(request: schemas.RenderRequest) -> schemas.RenderResponse:
        content = emit_report(request.report, request.format).decode("utf-8")
        return schemas.RenderResponse(content=content)

    @app.post("/embed-cache/warm", response_model=schemas.CacheWarmResponse)
    def embed_cache_warm(request: schemas.CacheWarmRequest) -> schemas.CacheWarmResponse:
        validate_config(request.config)
        runner = BenchmarkRunner(request.config)
        texts = _collect_texts(runner)
        counts = {}
        for subject in request.config.subjects:
            if subject not in request.config.providers:
                continue
            client = runner.client_for(subject)
            if texts:
                client.embed_batch(texts)
            counts[subject] = len(texts)
        return schemas.CacheWarmResponse(subjects=counts, texts=len(texts))

    return app


def _collect_texts(runner: BenchmarkRunner) -> list[str]:
    """Every raw dataset text a run would embed; perturbation-derived
    variants are produced (and cached) during the run itself."""
    seen: dict[str, None] = {}

    def add(*values: str) -> None:
        for value in values:
            if value:
                seen.setdefault(value)

    data = runner._data
    for record in data.get("human_preference", {}).get("comparisons", []):
        add(record.post, record.summary_a, record.summary_b)
    for record in data.get("human_preference", {}).get("axis_evals", []):
        add(record.text, record.summary)
    for pairs in data.get("robustness", {}).values():
        for pair in pairs:
            add(pair.text, pair.summary)
    for texts in data.get("sensitivity", {}).values():
        add(*texts)
    for sets in data.get("clustering", {}).values():
        for item in sets:
            add(*item.texts)
    for dataset in data.get("retrieval", {}).values():
        add(*dataset.queries.values())
        for doc in dataset.corpus.values():
            title = doc.get("title", "")
            add(f"{title} {doc['text']}".strip() if title else doc["text"])
    return list(seen)
