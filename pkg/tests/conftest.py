from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest

from simbench.tokenization import SimpleTokenizer


@pytest.fixture(scope="session")
def tok() -> SimpleTokenizer:
    return SimpleTokenizer()


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return Path(str(resources.files("simbench").joinpath("fixtures")))
