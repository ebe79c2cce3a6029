"""Locations of bundled data files (corpora, lexicons, replays)."""

from __future__ import annotations

from pathlib import Path

FIXTURES_DIR = Path(__file__).parent / "fixtures"


def fixture_path(*parts: str) -> Path:
    return FIXTURES_DIR.joinpath(*parts)
