"""Request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..config import RunConfig


class HealthResponse(BaseModel):
    status: str
    version: str


class PerturbRequest(BaseModel):
    text: str = Field(min_length=1)
    kind: str
    position: float = 0.0
    proportion: float = 0.15
    seed: int = 0
    fraction: float = 0.25
    vocab_path: str | None = None
    needle_path: str | None = None


class PerturbResponse(BaseModel):
    text: str
    kind: str


class PairSimilarityRequest(BaseModel):
    metric: str
    a: str
    b: str
    vocab_path: str | None = None


class PairSimilarityResponse(BaseModel):
    metric: str
    score: float


class BatchSimilarityRequest(BaseModel):
    metric: str
    query: str
    docs: list[str] = Field(min_length=1)
    vocab_path: str | None = None


class BatchSimilarityResponse(BaseModel):
    metric: str
    scores: list[float]


class RunRequest(BaseModel):
    config: RunConfig


class RunResponse(BaseModel):
    report: dict
    meta: dict


class RenderRequest(BaseModel):
    report: dict
    format: str = "table"


class RenderResponse(BaseModel):
    content: str


class CacheWarmRequest(BaseModel):
    config: RunConfig


class CacheWarmResponse(BaseModel):
    subjects: dict[str, int]
    texts: int
