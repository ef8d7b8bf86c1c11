"""simbench: a benchmark harness for similarity metrics and embeddings."""

__version__ = "0.1.0"

from .config import RunConfig, load_config
from .report import aggregate, emit_report
from .runner import run_benchmark

__all__ = ["RunConfig", "load_config", "aggregate", "emit_report", "run_benchmark", "__version__"]
