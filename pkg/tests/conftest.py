import json
from pathlib import Path

import pytest

from scholar_sounder import bundled_fixtures_dir
from scholar_sounder.config import build_config
from scholar_sounder.fetcher import Fetcher, FetchPolicy

GOLDEN_DIR = Path(__file__).parent / "golden"


def load_golden(name: str):
    return json.loads((GOLDEN_DIR / name).read_text("utf-8"))


@pytest.fixture
def fixtures_dir() -> Path:
    return bundled_fixtures_dir()


@pytest.fixture
def fixture_fetcher(fixtures_dir) -> Fetcher:
    return Fetcher(FetchPolicy(mode="fixture", fixtures_dir=fixtures_dir))


@pytest.fixture
def optics_config(fixtures_dir):
    """The reference run configuration: physical_optics base tag, the
    four-word optics theme dictionary, depth 5."""
    return build_config(
        {
            "base_tags": ["physical_optics"],
            "dictionary": ["optics", "optical", "photonics", "laser"],
            "fetch": {"mode": "fixture", "fixtures_dir": str(fixtures_dir)},
        }
    )
