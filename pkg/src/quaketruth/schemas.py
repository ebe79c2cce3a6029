"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from datetime import datetime
from typing import Any

from pydantic import BaseModel, Field

from . import SCHEMA_VERSION


class VersionedModel(BaseModel):
    schema_version: str = SCHEMA_VERSION


class EventPayload(BaseModel):
    event_id: str
    magnitude: float
    region_names: list[str]
    origin_time: datetime
    mode: str | None = None
    replay_file: str | None = None
    prior_median_deaths: float | None = None
    prior_dispersion_log10: float | None = None
    sigma_obs: float | None = None
    config: dict[str, Any] | None = None

    def as_registration(self) -> dict[str, Any]:
        payload = self.model_dump(exclude_none=True)
        payload["origin_time"] = self.origin_time.isoformat()
        return payload


class EventOut(VersionedModel):
    event_id: str
    magnitude: float
    region_names: list[str]
    origin_time: datetime
    mode: str
    status: str
    replay_file: str | None = None


class EventListOut(VersionedModel):
    events: list[EventOut]


class BatchRequest(BaseModel):
    count: int = Field(default=1, ge=1)
    all: bool = False


class BatchSummaryOut(VersionedModel):
    round: int
    window_start: datetime
    window_end: datetime
    fetched: int
    accepted: int
    filtered: int
    claims: int
    points: list[str]
    errors: list[str]


class BatchRunOut(VersionedModel):
    event_id: str
    batches: list[BatchSummaryOut]


class ClaimOut(VersionedModel):
    round: int
    kind: str
    post_id: str
    source: str
    verified: bool
    timestamp: datetime | None = None
    text: str | None = None
    value: int
    xi: float
    r: float
    rho: float
    information: float = Field(alias="IS")
    normalized: float = Field(alias="NIS")
    consensus: float = Field(alias="D")
    reliability: float = Field(alias="s")

    model_config = {"populate_by_name": True}


class ClaimListOut(VersionedModel):
    event_id: str
    claims: list[ClaimOut]


class TruthPointOut(VersionedModel):
    point_id: str
    kind: str
    value: int
    earliest_timestamp: datetime
    earliest_hours: float
    round: int
    status: str
    evidence: list[str]


class TruthListOut(VersionedModel):
    event_id: str
    points: list[TruthPointOut]


class ReviewRequest(BaseModel):
    action: str
    actor: str


class BinOut(BaseModel):
    low: float
    high: float | None = None  # None marks the open-ended top bin
    probability: float


class ProjectionOut(VersionedModel):
    event_id: str
    timestamp: datetime
    bins: list[BinOut]
    median: float
    p5: float
    p95: float
    updates: int


class HealthOut(VersionedModel):
    status: str = "ok"
    events: int = 0


class ErrorOut(VersionedModel):
    detail: str
