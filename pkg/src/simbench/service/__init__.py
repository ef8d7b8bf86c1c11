"""HTTP service exposing the benchmark core."""

from .app import create_app

__all__ = ["create_app"]
