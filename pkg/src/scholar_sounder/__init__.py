"""Toolkit for sounding a scholar-citation service into tag and co-author
networks, with filtering, clustering, and Gephi-ready exports."""

from pathlib import Path

__version__ = "0.1.0"

TOOL_NAME = "scholar-sounder"


def bundled_fixtures_dir() -> Path:
    """Offline page corpus shipped with the package."""
    return Path(__file__).parent / "fixtures"
