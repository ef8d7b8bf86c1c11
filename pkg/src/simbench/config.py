"""Run configuration: schema, loading, and validation.

Configs are JSON files validated against the pydantic models below.
Relative dataset paths are resolved against the config file's directory,
so the bundled fixture config works from any working directory.
"""

from __future__ import annotations

import json
from pathlib import Path

from pydantic import BaseModel, Field, ValidationError

from .errors import ConfigError
from .metrics import CLASSICAL_METRICS
from .tasks import CATEGORIES

DEFAULT_SEED = 42


class ProviderSettings(BaseModel):
    provider_id: str
    model_id: str
    dimension: int = Field(gt=0)
    endpoint_url: str = ""
    api_key_env: str = ""
    max_batch: int = Field(default=64, ge=1)
    max_in_flight: int = Field(default=2, ge=1)
    requests_per_minute: int = Field(default=600, ge=1)
    max_input_tokens: int | None = None


class TokenizerSettings(BaseModel):
    vocab_path: str | None = None


class PerturbSettings(BaseModel):
    needle_path: str | None = None


class CacheSettings(BaseModel):
    dir: str = ".simbench-cache"


class Bm25Settings(BaseModel):
    k1: float = 1.5
    b: float = 0.75
    epsilon: float = 0.25
    delta: float = 1.0


class RunConfig(BaseModel):
    seed: int = DEFAULT_SEED
    subjects: list[str]
    tasks: list[str] = Field(default_factory=lambda: list(CATEGORIES))
    datasets: dict[str, dict[str, str]] = Field(default_factory=dict)
    sample_sizes: dict[str, int] = Field(default_factory=dict)
    tokenizer: TokenizerSettings = Field(default_factory=TokenizerSettings)
    perturb: PerturbSettings = Field(default_factory=PerturbSettings)
    cache: CacheSettings = Field(default_factory=CacheSettings)
    bm25: Bm25Settings = Field(default_factory=Bm25Settings)
    providers: dict[str, ProviderSettings] = Field(default_factory=dict)
    clustering_size_cap: int = Field(default=2000, ge=2)
    jobs: int = Field(default=1, ge=1)
    output: str | None = None


def _resolve(path: str, base: Path) -> str:
    candidate = Path(path)
    if not candidate.is_absolute():
        candidate = base / candidate
    return str(candidate)


def resolve_paths(config: RunConfig, base: Path) -> RunConfig:
    """Resolve input paths against the config file's directory.

    The cache directory is an output and stays as written (a relative
    value lands under the process working directory), so a bundled
    read-only config never points writes into the package tree.
    """
    updated = config.model_copy(deep=True)
    for task, mapping in updated.datasets.items():
        for name, path in mapping.items():
            mapping[name] = _resolve(path, base)
    if updated.tokenizer.vocab_path:
        updated.tokenizer.vocab_path = _resolve(updated.tokenizer.vocab_path, base)
    if updated.perturb.needle_path:
        updated.perturb.needle_path = _resolve(updated.perturb.needle_path, base)
    return updated


def validate_config(config: RunConfig) -> None:
    """Cross-field checks pydantic cannot express; raises ConfigError with
    the offending key in the message."""
    if not config.subjects:
        raise ConfigError("subjects: at least one subject is required")
    for task in config.tasks:
        if task not in CATEGORIES:
            raise ConfigError(f"tasks: unknown task {task!r}")
    for subject in config.subjects:
        if subject not in CLASSICAL_METRICS and subject not in config.providers:
            raise ConfigError(
                f"subjects: {subject!r} is neither a classical metric "
                f"({', '.join(CLASSICAL_METRICS)}) nor a configured provider"
            )
    for task in config.tasks:
        mapping = config.datasets.get(task)
        if not mapping:
            raise ConfigError(f"datasets.{task}: no datasets configured")
        for name, path in mapping.items():
            if task == "human_preference":
                if not Path(path).is_file():
                    raise ConfigError(f"datasets.{task}.{name}: file not found: {path}")
            elif task == "retrieval":
                if not Path(path).is_dir():
                    raise ConfigError(
                        f"datasets.{task}.{name}: directory not found: {path}"
                    )
            elif not Path(path).is_file():
                raise ConfigError(f"datasets.{task}.{name}: file not found: {path}")
    if "human_preference" in config.tasks:
        mapping = config.datasets["human_preference"]
        for key in ("comparisons", "axis_evals"):
            if key not in mapping:
                raise ConfigError(f"datasets.human_preference.{key}: missing")
    if config.tokenizer.vocab_path and not Path(config.tokenizer.vocab_path).is_file():
        raise ConfigError(
            f"tokenizer.vocab_path: file not found: {config.tokenizer.vocab_path}"
        )
    if config.perturb.needle_path and not Path(config.perturb.needle_path).is_file():
        raise ConfigError(
            f"perturb.needle_path: file not found: {config.perturb.needle_path}"
        )


def load_config(path: str | Path) -> RunConfig:
    """Read, resolve, and validate a config file."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc.msg}") from exc
    try:
        config = RunConfig.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ConfigError(f"{path}: {location}: {first['msg']}") from exc
    config = resolve_paths(config, path.parent.resolve())
    validate_config(config)
    return config
