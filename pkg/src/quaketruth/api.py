"""HTTP JSON API over the pipeline service.

All JSON responses carry ``schema_version``; CSV reports carry it in the
``X-Schema-Version`` header. When an API token is configured every route
requires ``Authorization: Bearer <token>``.
"""

from __future__ import annotations

import os

from fastapi import Depends, FastAPI, HTTPException, Request, Response

from . import SCHEMA_VERSION
from .config import ENV_API_TOKEN, PipelineConfig
from .errors import (
    ConfigurationError,
    InputError,
    NotFoundError,
    StateError,
)
from .pipeline import BatchSummary, EventRecord, Service
from .schemas import (
    BatchRequest,
    BatchRunOut,
    BatchSummaryOut,
    ClaimListOut,
    ClaimOut,
    EventListOut,
    EventOut,
    EventPayload,
    HealthOut,
    ProjectionOut,
    ReviewRequest,
    TruthListOut,
    TruthPointOut,
)

REPORT_KINDS = ("truth_csv", "scores_csv", "bins_csv", "language_csv")


def _event_out(record: EventRecord) -> EventOut:
    return EventOut(
        event_id=record.event.event_id,
        magnitude=record.event.magnitude,
        region_names=list(record.event.region_names),
        origin_time=record.event.origin_time,
        mode=record.mode,
        status=record.status,
        replay_file=record.replay_file,
    )


def _summary_out(summary: BatchSummary) -> BatchSummaryOut:
    return BatchSummaryOut(
        round=summary.round_index,
        window_start=summary.window_start,
        window_end=summary.window_end,
        fetched=summary.fetched,
        accepted=summary.accepted,
        filtered=summary.filtered,
        claims=summary.claims,
        points=summary.points,
        errors=summary.errors,
    )


def _point_out(service: Service, event_id: str, point) -> TruthPointOut:
    origin = service.get_event(event_id).event.origin_time
    hours = (point.earliest_timestamp - origin).total_seconds() / 3600.0
    return TruthPointOut(
        point_id=point.point_id,
        kind=point.kind,
        value=point.value,
        earliest_timestamp=point.earliest_timestamp,
        earliest_hours=round(hours, 4),
        round=point.round_index,
        status=point.status,
        evidence=list(point.evidence),
    )


def create_app(service: Service, api_token: str | None = None) -> FastAPI:
    app = FastAPI(title="quaketruth", version=SCHEMA_VERSION)
    token = api_token if api_token is not None else os.environ.get(ENV_API_TOKEN, "")

    async def check_auth(request: Request) -> None:
        if not token:
            return
        header = request.headers.get("Authorization", "")
        if header != f"Bearer {token}":
            raise HTTPException(status_code=401, detail="missing or invalid bearer token")

    guarded = [Depends(check_auth)]

    @app.exception_handler(NotFoundError)
    async def _not_found(_, exc: NotFoundError):
        raise HTTPException(status_code=404, detail=str(exc))

    @app.exception_handler(StateError)
    async def _conflict(_, exc: StateError):
        raise HTTPException(status_code=409, detail=str(exc))

    @app.exception_handler(InputError)
    async def _bad_input(_, exc: InputError):
        raise HTTPException(status_code=422, detail=str(exc))

    @app.exception_handler(ConfigurationError)
    async def _bad_config(_, exc: ConfigurationError):
        raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/health", response_model=HealthOut)
    async def health() -> HealthOut:
        return HealthOut(status="ok", events=len(service.list_events()))

    @app.post("/events", response_model=EventOut, status_code=201, dependencies=guarded)
    async def register_event(payload: EventPayload) -> EventOut:
        record = service.register_event(payload.as_registration())
        return _event_out(record)

    @app.get("/events", response_model=EventListOut, dependencies=guarded)
    async def list_events() -> EventListOut:
        return EventListOut(events=[_event_out(r) for r in service.list_events()])

    @app.get("/events/{event_id}", response_model=EventOut, dependencies=guarded)
    async def get_event(event_id: str) -> EventOut:
        return _event_out(service.get_event(event_id))

    @app.post("/events/{event_id}/batch", response_model=BatchRunOut, dependencies=guarded)
    async def run_batch(event_id: str, request: BatchRequest | None = None) -> BatchRunOut:
        request = request or BatchRequest()
        if request.all:
            summaries = service.run_all_batches(event_id)
        else:
            summaries = [service.run_batch(event_id) for _ in range(request.count)]
        return BatchRunOut(event_id=event_id, batches=[_summary_out(s) for s in summaries])

    @app.get("/events/{event_id}/claims", response_model=ClaimListOut, dependencies=guarded)
    async def get_claims(event_id: str, round: int | None = None) -> ClaimListOut:
        rows = service.claims(event_id, round_index=round)
        claims = [
            ClaimOut(
                round=row["round"],
                kind=row["kind"],
                post_id=row["post_id"],
                source=row["source"],
                verified=row["verified"],
                timestamp=row.get("timestamp"),
                text=row.get("text"),
                value=row["value"],
                xi=row["xi"],
                r=row["r"],
                rho=row["rho"],
                IS=row["IS"],
                NIS=row["NIS"],
                D=row["D"],
                s=row["s"],
            )
            for row in rows
        ]
        return ClaimListOut(event_id=event_id, claims=claims)

    @app.get("/events/{event_id}/truth", response_model=TruthListOut, dependencies=guarded)
    async def get_truth(
        event_id: str, status: str | None = None, kind: str | None = None
    ) -> TruthListOut:
        points = service.truth_points(event_id, status=status, kind=kind)
        return TruthListOut(
            event_id=event_id, points=[_point_out(service, event_id, p) for p in points]
        )

    @app.post("/truth/{point_id:path}/review", response_model=TruthPointOut, dependencies=guarded)
    async def review_point(point_id: str, request: ReviewRequest) -> TruthPointOut:
        point = service.review(point_id, request.action, request.actor)
        runtime = service._find_point_runtime(point_id)
        return _point_out(service, runtime.record.event.event_id, point)

    @app.get("/events/{event_id}/projection", response_model=ProjectionOut, dependencies=guarded)
    async def get_projection(event_id: str) -> ProjectionOut:
        return ProjectionOut(**service.projection(event_id))

    @app.get("/events/{event_id}/reports/{kind}", dependencies=guarded)
    async def get_report(event_id: str, kind: str) -> Response:
        if kind not in REPORT_KINDS:
            raise InputError(f"unknown report kind {kind!r}")
        body = service.export_report(event_id, kind)
        return Response(
            content=body,
            media_type="text/csv; charset=utf-8",
            headers={"X-Schema-Version": SCHEMA_VERSION},
        )

    return app


def create_app_from_config(config: PipelineConfig, api_token: str | None = None) -> FastAPI:
    return create_app(Service(config), api_token=api_token)
