from __future__ import annotations

import json
from datetime import datetime, timedelta, timezone

import pytest

from quaketruth.classify import train_from_csv
from quaketruth.config import load_config
from quaketruth.extract import CasualtyClaim
from quaketruth.ingest import EarthquakeEvent, RawPost
from quaketruth.pipeline import Service
from quaketruth.resources import fixture_path
from quaketruth.truth import ScoredClaim

LUDING_ORIGIN = datetime(2022, 9, 5, 4, 52, tzinfo=timezone.utc)
HAITI_ORIGIN = datetime(2021, 8, 14, 12, 29, tzinfo=timezone.utc)


@pytest.fixture(scope="session")
def event_model():
    return train_from_csv(fixture_path("corpus", "event.csv"), stage="event", seed=7)


@pytest.fixture(scope="session")
def stats_model():
    return train_from_csv(fixture_path("corpus", "stats.csv"), stage="statistics", seed=7)


@pytest.fixture
def luding_event() -> EarthquakeEvent:
    return EarthquakeEvent(
        event_id="luding-2022",
        magnitude=6.8,
        region_names=("Luding", "Sichuan", "China", "泸定", "四川", "Ganzi"),
        origin_time=LUDING_ORIGIN,
    )


@pytest.fixture
def haiti_event() -> EarthquakeEvent:
    return EarthquakeEvent(
        event_id="haiti-2021",
        magnitude=7.2,
        region_names=("Haiti", "Les Cayes", "Ouest", "Sud", "Ayiti", "Haïti"),
        origin_time=HAITI_ORIGIN,
    )


@pytest.fixture
def luding_payload() -> dict:
    payload = json.loads(fixture_path("events", "luding.json").read_text("utf-8"))
    payload["replay_file"] = str(fixture_path("replays", "luding_2022.jsonl"))
    return payload


@pytest.fixture
def haiti_payload() -> dict:
    payload = json.loads(fixture_path("events", "haiti.json").read_text("utf-8"))
    payload["replay_file"] = str(fixture_path("replays", "haiti_sample.jsonl"))
    return payload


@pytest.fixture
def make_service(tmp_path):
    """Factory for services on throwaway data directories."""
    counter = {"n": 0}

    def factory(**overrides) -> Service:
        counter["n"] += 1
        data_dir = tmp_path / f"svc{counter['n']}"
        config = load_config(None, data_dir=str(data_dir), **overrides)
        return Service(config)

    return factory


def make_post(pid: str, text: str, hours: float = 1.0, source: str = "acct",
              origin: datetime = LUDING_ORIGIN, language: str = "en",
              platform: str = "social", verified: bool = False,
              is_forward: bool = False) -> RawPost:
    return RawPost(
        post_id=pid,
        source_account=source,
        platform=platform,
        verified=verified,
        timestamp=origin + timedelta(seconds=round(hours * 3600)),
        language=language,
        text=text,
        is_forward=is_forward,
    )


def make_scored(source: str, value: int, round_index: int, xi: float = 0.6,
                r: float = 0.5, rho: float = 1.0, hours: float = 1.0,
                kind: str = "deaths", post_id: str | None = None) -> ScoredClaim:
    claim = CasualtyClaim(
        post_id=post_id or f"{source}-{value}-{round_index}",
        source_account=source,
        timestamp=LUDING_ORIGIN + timedelta(seconds=round(hours * 3600)),
        kind=kind,
        value=value,
        confidence=xi,
    )
    return ScoredClaim(claim=claim, relevance=r, independence=rho, round_index=round_index)
