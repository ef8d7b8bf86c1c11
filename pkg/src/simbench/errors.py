"""Exception hierarchy shared across the package."""

from __future__ import annotations


class SimbenchError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SimbenchError):
    """A caller supplied an argument that violates an operation's contract."""


class ConfigError(SimbenchError):
    """A run configuration is invalid (bad value, missing path, missing key)."""


class DatasetFormatError(SimbenchError):
    """A dataset file is malformed; carries file, line, and field context."""

    def __init__(self, path: str, line: int | None, message: str):
        self.path = path
        self.line = line
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"{where}: {message}")


class TransportError(SimbenchError):
    """A provider request failed at the network level after retries."""


class ProviderError(SimbenchError):
    """An embedding provider rejected a request; carries the HTTP status."""

    def __init__(self, status: int, message: str):
        self.status = status
        super().__init__(f"provider returned {status}: {message}")


class CacheError(SimbenchError):
    """A cache entry could not be read; names the offending key."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"cache entry {key}: {message}")


class DegenerateInputError(SimbenchError):
    """A statistic is undefined for the given data (e.g. zero variance)."""


class NumericError(SimbenchError):
    """A numeric operation received values it cannot handle (e.g. zero norm)."""
