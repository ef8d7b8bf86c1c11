"""Embedding access: providers, persistent cache, batching, retries.

Vectors are cached on disk keyed by a SHA-256 digest of
``(provider_id, model_id, text)``, one JSON file per entry, so corpora can
be re-scored across runs and processes without repeating provider calls.
The mock provider derives vectors purely from the text content, which
keeps the whole harness runnable offline and byte-reproducible.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import httpx

from .errors import CacheError, ConfigError, InputError, ProviderError, TransportError
from .rng import Rng, fnv1a64
from .tokenization import Tokenizer

RETRYABLE_STATUSES = frozenset({429, 500, 502, 503, 504})
MAX_ATTEMPTS = 5


@dataclass(frozen=True)
class ProviderConfig:
    provider_id: str
    model_id: str
    dimension: int
    endpoint_url: str = ""
    api_key_env: str = ""
    max_batch: int = 64
    max_in_flight: int = 2
    requests_per_minute: int = 600
    max_input_tokens: int | None = None

    def __post_init__(self) -> None:
        if self.dimension <= 0:
            raise ConfigError("provider dimension must be > 0")
        if self.max_batch < 1 or self.max_in_flight < 1 or self.requests_per_minute < 1:
            raise ConfigError("provider throughput limits must be >= 1")


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]
    text_digest: str

    def __len__(self) -> int:
        return len(self.values)


def text_digest(provider_id: str, model_id: str, text: str) -> str:
    """Cache key: SHA-256 over provider, model, and text content."""
    payload = "\x1f".join((provider_id, model_id, text)).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


def mock_embed(text: str, dimension: int, seed: int = 0) -> EmbeddingVector:
    """Deterministic pseudo-embedding: unit-norm gaussian vector seeded by
    the text's content hash."""
    if dimension < 2:
        raise InputError("mock embeddings need dimension >= 2")
    rng = Rng(fnv1a64(text) ^ (seed & (2**64 - 1)))
    values = [rng.gauss() for _ in range(dimension)]
    norm = sum(v * v for v in values) ** 0.5
    if norm == 0.0:
        values[0] = 1.0
        norm = 1.0
    return EmbeddingVector(
        values=tuple(v / norm for v in values),
        text_digest=hashlib.sha256(text.encode("utf-8")).hexdigest(),
    )


class EmbeddingCache:
    """Append-friendly on-disk key-value store, one JSON file per vector.

    Concurrent readers are safe; writers use write-to-temp-then-rename so
    a torn write can never be observed.  Corrupt entries are reported and
    treated as misses.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.errors: list[CacheError] = []

    def _path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def get(self, key: str) -> EmbeddingVector | None:
        path = self._path(key)
        if not path.exists():
            return None
        try:
            payload = json.loads(path.read_text("utf-8"))
            return EmbeddingVector(
                values=tuple(float(v) for v in payload["values"]),
                text_digest=str(payload["text_digest"]),
            )
        except (ValueError, KeyError, TypeError, OSError) as exc:
            self.errors.append(CacheError(key, f"unreadable entry ({exc}); refetching"))
            return None

    def put(self, key: str, vector: EmbeddingVector) -> None:
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps(
            {"values": list(vector.values), "text_digest": vector.text_digest}
        )
        tmp = path.with_suffix(f".tmp.{os.getpid()}.{threading.get_ident()}")
        tmp.write_text(payload, "utf-8")
        tmp.replace(path)


class RateLimiter:
    """Sliding 60-second window over request timestamps."""

    def __init__(
        self,
        requests_per_minute: int,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.limit = requests_per_minute
        self.clock = clock
        self.sleep = sleep
        self._stamps: deque[float] = deque()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        with self._lock:
            while True:
                now = self.clock()
                while self._stamps and now - self._stamps[0] >= 60.0:
                    self._stamps.popleft()
                if len(self._stamps) < self.limit:
                    self._stamps.append(now)
                    return
                self.sleep(60.0 - (now - self._stamps[0]))


class MockProvider:
    """Offline provider producing deterministic content-hash vectors."""

    def __init__(self, config: ProviderConfig):
        self.config = config
        self.calls = 0
        self._seed = fnv1a64(config.model_id)

    def fetch(self, texts: Sequence[str]) -> list[list[float]]:
        self.calls += 1
        return [
            list(mock_embed(text, self.config.dimension, self._seed).values)
            for text in texts
        ]


class HttpProvider:
    """OpenAI-compatible embeddings endpoint: POST {model, input} and read
    back {data: [{index, embedding}]}."""

    def __init__(self, config: ProviderConfig, client: httpx.Client | None = None):
        self.config = config
        self.calls = 0
        self._client = client or httpx.Client(timeout=60.0)
        if config.api_key_env:
            key = os.environ.get(config.api_key_env)
            if not key:
                raise ConfigError(
                    f"environment variable {config.api_key_env} is not set"
                )
            self._headers = {"Authorization": f"Bearer {key}"}
        else:
            self._headers = {}

    def fetch(self, texts: Sequence[str]) -> list[list[float]]:
        self.calls += 1
        try:
            response = self._client.post(
                self.config.endpoint_url,
                json={"model": self.config.model_id, "input": list(texts)},
                headers=self._headers,
            )
        except httpx.HTTPError as exc:
            raise TransportError(str(exc)) from exc
        if response.status_code != 200:
            raise ProviderError(response.status_code, response.text[:200])
        try:
            rows = sorted(response.json()["data"], key=lambda row: row["index"])
            vectors = [[float(v) for v in row["embedding"]] for row in rows]
        except (KeyError, ValueError, TypeError) as exc:
            raise ProviderError(200, f"malformed response body: {exc}") from exc
        if len(vectors) != len(texts):
            raise ProviderError(200, "response vector count != input count")
        return vectors


def build_provider(config: ProviderConfig):
    if config.provider_id == "mock":
        return MockProvider(config)
    return HttpProvider(config)


@dataclass
class EmbeddingClient:
    """Order-preserving, cached, rate-limited batch embedding."""

    config: ProviderConfig
    cache: EmbeddingCache
    provider: object = None
    tokenizer: Tokenizer | None = None
    clock: Callable[[], float] = time.monotonic
    sleep: Callable[[float], None] = time.sleep
    truncations: int = 0
    _limiter: RateLimiter = field(init=False, repr=False)
    _memory: dict = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.provider is None:
            self.provider = build_provider(self.config)
        self._limiter = RateLimiter(
            self.config.requests_per_minute, clock=self.clock, sleep=self.sleep
        )
        self._memory = {}

    def _prepare(self, text: str) -> str:
        limit = self.config.max_input_tokens
        if limit is None or self.tokenizer is None:
            return text
        tokens = self.tokenizer.encode(text).tokens
        if len(tokens) <= limit:
            return text
        self.truncations += 1
        return self.tokenizer.decode(tokens[:limit])

    def _fetch_with_retry(self, texts: Sequence[str]) -> list[list[float]]:
        backoff = Rng(fnv1a64(texts[0]))
        for attempt in range(MAX_ATTEMPTS):
            self._limiter.acquire()
            try:
                return self.provider.fetch(texts)
            except TransportError:
                if attempt == MAX_ATTEMPTS - 1:
                    raise
            except ProviderError as exc:
                if exc.status not in RETRYABLE_STATUSES or attempt == MAX_ATTEMPTS - 1:
                    raise
            self.sleep(0.5 * (2**attempt) * (1.0 + backoff.random()))
        raise TransportError("retry budget exhausted")  # pragma: no cover

    def embed_batch(self, texts: Sequence[str]) -> list[EmbeddingVector]:
        """One vector per input text, in input order.

        The cache is consulted first; misses are deduplicated, fetched in
        provider-sized batches (bounded in-flight), and persisted before
        the call returns.
        """
        if not texts:
            raise InputError("embed_batch requires at least one text")
        if any(not text for text in texts):
            raise InputError("embed_batch texts must be non-empty")
        prepared = [self._prepare(text) for text in texts]
        keys = [
            text_digest(self.config.provider_id, self.config.model_id, text)
            for text in prepared
        ]
        found: dict[str, EmbeddingVector] = {}
        pending: dict[str, str] = {}
        for text, key in zip(prepared, keys):
            if key in found or key in pending:
                continue
            hit = self._memory.get(key)
            if hit is None:
                hit = self.cache.get(key)
            if hit is not None and len(hit) == self.config.dimension:
                found[key] = hit
                self._memory[key] = hit
            else:
                pending[key] = text
        if pending:
            order = list(pending.items())
            batches = [
                order[i : i + self.config.max_batch]
                for i in range(0, len(order), self.config.max_batch)
            ]
            with ThreadPoolExecutor(max_workers=self.config.max_in_flight) as pool:
                fetched = list(
                    pool.map(
                        lambda batch: self._fetch_with_retry([t for _, t in batch]),
                        batches,
                    )
                )
            for batch, vectors in zip(batches, fetched):
                for (key, text), values in zip(batch, vectors):
                    if len(values) != self.config.dimension:
                        raise ProviderError(
                            200,
                            f"expected dimension {self.config.dimension}, "
                            f"got {len(values)}",
                        )
                    vector = EmbeddingVector(
                        values=tuple(values),
                        text_digest=hashlib.sha256(text.encode("utf-8")).hexdigest(),
                    )
                    self.cache.put(key, vector)
                    self._memory[key] = vector
                    found[key] = vector
        return [found[key] for key in keys]
