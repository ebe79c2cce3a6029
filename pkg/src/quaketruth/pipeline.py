"""Event lifecycle orchestration: batches, reviews, exports, recovery.

One :class:`Service` owns every registered event. Batches run the full
ingest -> classify -> extract -> truth chain for one half-hour window and
persist all intermediate artifacts to the append-only store; reviews gate
what reaches the loss projection. Restarting a service on an existing data
directory rebuilds all in-memory state by replaying the logs.
"""

from __future__ import annotations

import csv
import io
import threading
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any

from . import classify as classify_mod
from .config import (
    ENV_CLASSIFIER_URL,
    ENV_LLM_URL,
    ENV_NEWS_TOKEN,
    ENV_NEWS_URL,
    ENV_SOCIAL_TOKEN,
    ENV_SOCIAL_URL,
    PipelineConfig,
    PriorSpec,
    env_url,
    with_prior,
)
from .errors import (
    ConfigurationError,
    InputError,
    NotFoundError,
    RetryableSourceError,
    StateError,
)
from .extract import (
    CasualtyClaim,
    CompletionClient,
    Gazetteer,
    Lexicon,
    default_template,
    extract_llm,
    extract_rules,
    validate_claim,
)
from .ingest import (
    EarthquakeEvent,
    KeywordDictionary,
    RawPost,
    ReplayLoad,
    SourceClient,
    TriggerConfig,
    dedup_exact,
    fetch_batch,
    generate_queries,
    load_replay,
    should_trigger,
)
from .project import (
    Observation,
    PosteriorGrid,
    bin_probabilities,
    init_prior,
    project_final,
    update_posterior,
)
from .resources import fixture_path
from .truth import (
    ScoredClaim,
    TruthPoint,
    TruthState,
    independence_score,
    relevance_score,
    run_round,
)

KINDS = ("deaths", "injuries")

# Trained stage models are immutable; share them across services in-process.
_MODEL_CACHE: dict[tuple[str, int], tuple["classify_mod.ClassifierModel", "classify_mod.ClassifierModel"]] = {}


def _iso(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat()


def _parse_ts(value: str) -> datetime:
    return datetime.fromisoformat(value.replace("Z", "+00:00")).astimezone(timezone.utc)


@dataclass
class EventRecord:
    event: EarthquakeEvent
    config: PipelineConfig
    mode: str  # replay | live
    replay_file: str | None = None
    status: str = "active"

    def to_json(self) -> dict[str, Any]:
        cfg = asdict(self.config)
        return {
            "event_id": self.event.event_id,
            "magnitude": self.event.magnitude,
            "region_names": list(self.event.region_names),
            "origin_time": _iso(self.event.origin_time),
            "mode": self.mode,
            "replay_file": self.replay_file,
            "status": self.status,
            "config": cfg,
        }

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "EventRecord":
        cfg = dict(doc["config"])
        prior = PriorSpec(**cfg.pop("prior"))
        return cls(
            event=EarthquakeEvent(
                event_id=doc["event_id"],
                magnitude=doc["magnitude"],
                region_names=tuple(doc["region_names"]),
                origin_time=_parse_ts(doc["origin_time"]),
                trigger_threshold_met=True,
            ),
            config=PipelineConfig(prior=prior, **cfg),
            mode=doc["mode"],
            replay_file=doc.get("replay_file"),
            status=doc.get("status", "active"),
        )


@dataclass
class ReviewAction:
    point_id: str
    action: str  # approve | reject
    actor: str
    timestamp: datetime


@dataclass
class BatchSummary:
    round_index: int
    window_start: datetime
    window_end: datetime
    fetched: int = 0
    accepted: int = 0
    filtered: int = 0
    claims: int = 0
    points: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)


@dataclass
class _Runtime:
    record: EventRecord
    truth: dict[str, TruthState]
    grid: PosteriorGrid
    seen_ids: set[str] = field(default_factory=set)
    window_texts: deque[str] = field(default_factory=deque)
    replay: ReplayLoad | None = None
    replay_cursor: int = 0
    round_index: int = 0
    points: dict[str, TruthPoint] = field(default_factory=dict)
    point_order: list[str] = field(default_factory=list)
    bin_updates: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def origin(self) -> datetime:
        return self.record.event.origin_time

    def replay_exhausted(self) -> bool:
        return self.replay is None or self.replay_cursor >= len(self.replay.posts)


class Service:
    """Single-process pipeline host; one single-writer runtime per event."""

    def __init__(
        self,
        config: PipelineConfig,
        source_clients: dict[str, SourceClient] | None = None,
        completion_client: CompletionClient | None = None,
    ):
        from .store import EventStore  # local import keeps module DAG flat

        self.config = config
        self.store = EventStore(config.data_dir)
        self.source_clients = source_clients if source_clients is not None else self._env_clients()
        self.completion_client = completion_client
        if self.completion_client is None and config.extractor == "llm":
            llm_url = env_url(ENV_LLM_URL)
            if llm_url:
                self.completion_client = CompletionClient(
                    llm_url,
                    beam_width=config.beam_width,
                    max_tokens=config.max_tokens,
                    max_inflight=config.max_inflight_requests,
                )
        self.template = default_template()
        self.lexicon = Lexicon.from_csv(config.lexicon_path or fixture_path("lexicon.csv"))
        self.gazetteer = Gazetteer.from_csv(
            config.gazetteer_path or fixture_path("gazetteer.csv")
        )
        self.dictionary = KeywordDictionary.from_csv(
            config.keywords_path or fixture_path("keywords.csv")
        )
        self._runtimes: dict[str, _Runtime] = {}
        self._registry_lock = threading.Lock()
        self._recovering = False
        self._scheduler: threading.Thread | None = None
        self._scheduler_stop = threading.Event()
        self._recover_all()

    def _env_clients(self) -> dict[str, SourceClient]:
        """Build live source clients from environment endpoints, if set."""
        clients: dict[str, SourceClient] = {}
        social = env_url(ENV_SOCIAL_URL)
        if social:
            clients["social"] = SourceClient(
                social, "social", token=env_url(ENV_SOCIAL_TOKEN), cap=self.config.social_cap
            )
        news = env_url(ENV_NEWS_URL)
        if news:
            clients["news"] = SourceClient(
                news, "news", token=env_url(ENV_NEWS_TOKEN), cap=self.config.news_cap
            )
        return clients

    # -- classifiers --------------------------------------------------------

    def models(self) -> tuple[classify_mod.ClassifierModel, classify_mod.ClassifierModel]:
        """Stage models, trained once per (corpus, seed) and shared in-process.

        With the remote backend configured, each stage proxies to the model
        server and keeps the trained baseline as its fallback.
        """
        corpus_dir = Path(self.config.corpus_dir) if self.config.corpus_dir else fixture_path("corpus")
        key = (str(corpus_dir), self.config.classifier_seed)
        if key not in _MODEL_CACHE:
            _MODEL_CACHE[key] = (
                classify_mod.train_from_csv(corpus_dir / "event.csv", stage="event",
                                            seed=self.config.classifier_seed),
                classify_mod.train_from_csv(corpus_dir / "stats.csv", stage="statistics",
                                            seed=self.config.classifier_seed),
            )
        event_model, stats_model = _MODEL_CACHE[key]
        if self.config.classifier_backend == "remote":
            endpoint = env_url(ENV_CLASSIFIER_URL)
            if not endpoint:
                raise ConfigurationError("remote classifier backend needs QT_CLASSIFIER_URL")
            remote_event = classify_mod.ClassifierModel(
                stage="event", backend="remote", remote_endpoint=endpoint
            )
            remote_event._fallback = event_model
            remote_stats = classify_mod.ClassifierModel(
                stage="statistics", backend="remote", remote_endpoint=endpoint
            )
            remote_stats._fallback = stats_model
            return remote_event, remote_stats
        return event_model, stats_model

    # -- registration -------------------------------------------------------

    def register_event(self, payload: dict[str, Any]) -> EventRecord:
        event = EarthquakeEvent(
            event_id=str(payload["event_id"]),
            magnitude=float(payload["magnitude"]),
            region_names=tuple(payload["region_names"]),
            origin_time=_parse_ts(payload["origin_time"]),
            trigger_threshold_met=True,
        )
        config = with_prior(self.config, payload)
        overrides = payload.get("config") or {}
        if overrides:
            config = replace(config, **overrides)
        if not should_trigger(event, TriggerConfig(config.trigger_threshold)):
            raise InputError(
                f"below trigger threshold (M{event.magnitude} < {config.trigger_threshold})"
            )
        with self._registry_lock:
            if self.store.exists(event.event_id):
                raise StateError(f"event {event.event_id} already registered")
            mode = payload.get("mode", "replay" if payload.get("replay_file") else "live")
            record = EventRecord(
                event=event, config=config, mode=mode, replay_file=payload.get("replay_file")
            )
            self.store.write_record(event.event_id, record.to_json())
            self._runtimes[event.event_id] = self._build_runtime(record)
        return record

    def _build_runtime(self, record: EventRecord) -> _Runtime:
        replay = None
        if record.mode == "replay":
            if not record.replay_file:
                raise ConfigurationError("replay mode requires replay_file")
            replay = load_replay(record.replay_file)
        runtime = _Runtime(
            record=record,
            truth={kind: TruthState(kind=kind) for kind in KINDS},
            grid=init_prior(record.config.prior),
            replay=replay,
        )
        runtime.window_texts = deque(maxlen=record.config.independence_window)
        return runtime

    def _runtime(self, event_id: str) -> _Runtime:
        runtime = self._runtimes.get(event_id)
        if runtime is None:
            raise NotFoundError(f"unknown event {event_id}")
        return runtime

    def list_events(self) -> list[EventRecord]:
        return [self._runtimes[eid].record for eid in sorted(self._runtimes)]

    def get_event(self, event_id: str) -> EventRecord:
        return self._runtime(event_id).record

    # -- batch execution ----------------------------------------------------

    def _acquire(self, runtime: _Runtime, window_start: datetime, window_end: datetime,
                 errors: list[str]) -> list[RawPost]:
        record = runtime.record
        if runtime.replay is not None:
            posts: list[RawPost] = []
            floor = runtime.origin - timedelta(hours=record.config.pre_event_hours)
            while (
                runtime.replay_cursor < len(runtime.replay.posts)
                and runtime.replay.posts[runtime.replay_cursor].timestamp < window_end
            ):
                post = runtime.replay.posts[runtime.replay_cursor]
                runtime.replay_cursor += 1
                if post.timestamp >= floor:
                    posts.append(post)
            return posts
        specs = generate_queries(
            record.event,
            self.dictionary,
            window_start,
            window_end,
            cadence_minutes=record.config.cadence_minutes,
        )
        posts = []
        with ThreadPoolExecutor(max_workers=record.config.max_inflight_requests) as pool:
            def fetch_one(spec):
                client = self.source_clients.get(spec.source)
                if client is None:
                    raise ConfigurationError(f"no client configured for {spec.source}")
                return fetch_batch(client, spec)

            futures = [pool.submit(fetch_one, spec) for spec in specs]
            for spec, future in zip(specs, futures):
                try:
                    posts.extend(future.result())
                except (RetryableSourceError, ConfigurationError) as exc:
                    errors.append(f"{spec.source}: {exc}")
        return posts

    def _extract_answer(self, runtime: _Runtime, post: RawPost, errors: list[str]):
        config = runtime.record.config
        if config.extractor == "llm":
            if self.completion_client is None:
                raise ConfigurationError("llm extractor selected but no completion client")
            try:
                return extract_llm(
                    self.completion_client,
                    self.template,
                    post,
                    runtime.record.event,
                    confidence_range=(config.confidence_low, config.confidence_high),
                )
            except RetryableSourceError as exc:
                errors.append(f"extract {post.post_id}: {exc}")
                return None
        return extract_rules(post, runtime.record.event, self.lexicon, self.gazetteer)

    def run_batch(self, event_id: str) -> BatchSummary:
        runtime = self._runtime(event_id)
        with runtime.lock:
            return self._run_batch_locked(runtime)

    def _run_batch_locked(self, runtime: _Runtime) -> BatchSummary:
        record = runtime.record
        if record.status != "active":
            raise StateError(f"event {record.event.event_id} is not active")
        round_index = runtime.round_index + 1
        cadence = timedelta(minutes=record.config.cadence_minutes)
        window_start = runtime.origin + (round_index - 1) * cadence
        window_end = window_start + cadence
        summary = BatchSummary(round_index, window_start, window_end)

        batch = self._acquire(runtime, window_start, window_end, summary.errors)
        summary.fetched = len(batch)
        accepted = dedup_exact(batch, runtime.seen_ids)
        summary.accepted = len(accepted)

        filtered = classify_mod.filter_hierarchical(self.models(), accepted)
        filtered_ids = {post.post_id for post, _, _ in filtered}
        summary.filtered = len(filtered)

        for post in accepted:
            runtime.seen_ids.add(post.post_id)
            self._persist_post(record.event.event_id, post, post.post_id in filtered_ids)

        scored: dict[str, list[ScoredClaim]] = {kind: [] for kind in KINDS}
        verified_map: dict[str, bool] = {}
        claim_meta: dict[str, RawPost] = {}
        for post, event_prob, stats_prob in sorted(
            filtered, key=lambda item: (item[0].timestamp, item[0].post_id)
        ):
            answer = self._extract_answer(runtime, post, summary.errors)
            rho = independence_score(post.is_forward, post.text, runtime.window_texts)
            runtime.window_texts.append(post.text)
            if answer is None:
                continue
            match_conf = answer.field_confidences.get("event_match", 0.5)
            r = relevance_score(event_prob, stats_prob, match_conf)
            for claim in validate_claim(answer, record.event, post):
                scored[claim.kind].append(
                    ScoredClaim(claim=claim, relevance=r, independence=rho, round_index=round_index)
                )
                verified_map[post.post_id] = post.verified
                claim_meta[post.post_id] = post

        for kind in KINDS:
            outcome = run_round(runtime.truth[kind], scored[kind], round_index, verified_map)
            summary.claims += len(scored[kind])
            for row in outcome.score_rows:
                post = claim_meta.get(row.post_id)
                self._persist_claim_row(record.event.event_id, row, post)
            if outcome.point is not None:
                self._register_point(runtime, outcome.point, summary)
        runtime.round_index = round_index

        if not self._recovering:
            self.store.append(
                record.event.event_id,
                "batches",
                {
                    "round": round_index,
                    "window_start": _iso(window_start),
                    "window_end": _iso(window_end),
                    "fetched": summary.fetched,
                    "accepted": summary.accepted,
                    "filtered": summary.filtered,
                    "claims": summary.claims,
                    "points": summary.points,
                    "errors": summary.errors,
                },
            )
            for message in summary.errors:
                self.store.append(record.event.event_id, "errors", {"round": round_index, "error": message})
        return summary

    def tick(self) -> list[BatchSummary]:
        """Run one batch for every active live event (scheduler step)."""
        summaries = []
        for event_id in sorted(self._runtimes):
            runtime = self._runtimes[event_id]
            if runtime.record.mode == "live" and runtime.record.status == "active":
                summaries.append(self.run_batch(event_id))
        return summaries

    def start_scheduler(self, interval_seconds: float | None = None) -> None:
        """Tick live events on the batch cadence, against a monotonic clock."""
        if self._scheduler is not None:
            return
        interval = interval_seconds or self.config.cadence_minutes * 60.0
        self._scheduler_stop.clear()

        def loop() -> None:
            next_tick = time.monotonic()
            while not self._scheduler_stop.is_set():
                now = time.monotonic()
                if now >= next_tick:
                    try:
                        self.tick()
                    except Exception:  # batches degrade; the scheduler survives
                        pass
                    next_tick = now + interval
                self._scheduler_stop.wait(min(1.0, max(next_tick - time.monotonic(), 0.01)))

        self._scheduler = threading.Thread(target=loop, name="quaketruth-scheduler", daemon=True)
        self._scheduler.start()

    def stop_scheduler(self) -> None:
        if self._scheduler is None:
            return
        self._scheduler_stop.set()
        self._scheduler.join(timeout=5.0)
        self._scheduler = None

    def run_all_batches(self, event_id: str, limit: int = 10_000) -> list[BatchSummary]:
        """Replay helper: run batches until the replay file is exhausted."""
        runtime = self._runtime(event_id)
        if runtime.replay is None:
            raise InputError("run_all_batches requires a replay-mode event")
        summaries = []
        while not runtime.replay_exhausted() and len(summaries) < limit:
            summaries.append(self.run_batch(event_id))
        return summaries

    def _persist_post(self, event_id: str, post: RawPost, filtered: bool) -> None:
        if self._recovering:
            return
        self.store.append(
            event_id,
            "posts",
            {
                "post_id": post.post_id,
                "source_account": post.source_account,
                "platform": post.platform,
                "verified": post.verified,
                "timestamp": _iso(post.timestamp),
                "language": post.language,
                "text": post.text,
                "is_forward": post.is_forward,
                "cited_links": list(post.cited_links),
                "filtered": filtered,
            },
        )

    def _persist_claim_row(self, event_id: str, row, post: RawPost | None) -> None:
        if self._recovering:
            return
        self.store.append(
            event_id,
            "claims",
            {
                "round": row.round_index,
                "kind": row.kind,
                "post_id": row.post_id,
                "source": row.source,
                "verified": row.verified,
                "timestamp": _iso(post.timestamp) if post else None,
                "text": post.text if post else None,
                "value": row.value,
                "xi": row.xi,
                "r": row.r,
                "rho": row.rho,
                "IS": row.information,
                "NIS": row.normalized,
                "D": row.consensus,
                "s": row.reliability,
            },
        )

    def _register_point(self, runtime: _Runtime, point: TruthPoint, summary: BatchSummary | None) -> None:
        event_id = runtime.record.event.event_id
        point.point_id = f"{event_id}:{point.point_id}"
        runtime.points[point.point_id] = point
        runtime.point_order.append(point.point_id)
        if summary is not None:
            summary.points.append(point.point_id)
        if not self._recovering:
            self.store.append(
                event_id,
                "truth_points",
                {
                    "point_id": point.point_id,
                    "kind": point.kind,
                    "value": point.value,
                    "earliest_timestamp": _iso(point.earliest_timestamp),
                    "round": point.round_index,
                    "evidence": list(point.evidence),
                },
            )
        if runtime.record.config.auto_approve and not self._recovering:
            self._apply_review(runtime, point, "approve", actor="auto")

    # -- review workflow ----------------------------------------------------

    def review(self, point_id: str, action: str, actor: str) -> TruthPoint:
        if action not in ("approve", "reject"):
            raise InputError(f"unknown review action {action!r}")
        runtime = self._find_point_runtime(point_id)
        with runtime.lock:
            point = runtime.points[point_id]
            if point.status != "pending":
                raise StateError(f"point {point_id} already {point.status}")
            return self._apply_review(runtime, point, action, actor)

    def _find_point_runtime(self, point_id: str) -> _Runtime:
        for runtime in self._runtimes.values():
            if point_id in runtime.points:
                return runtime
        raise NotFoundError(f"unknown truth point {point_id}")

    def _apply_review(
        self, runtime: _Runtime, point: TruthPoint, action: str, actor: str
    ) -> TruthPoint:
        point.status = "approved" if action == "approve" else "rejected"
        event_id = runtime.record.event.event_id
        if not self._recovering:
            self.store.append(
                event_id,
                "reviews",
                {
                    "point_id": point.point_id,
                    "action": action,
                    "actor": actor,
                    "timestamp": _iso(datetime.now(timezone.utc)),
                },
            )
        if action == "approve" and point.kind == "deaths":
            hours = (point.earliest_timestamp - runtime.origin).total_seconds() / 3600.0
            obs = Observation(t_hours=max(hours, 1e-6), count=point.value)
            runtime.grid = update_posterior(runtime.grid, obs)
            runtime.bin_updates += 1
            report = bin_probabilities(runtime.grid, point.earliest_timestamp)
            median, p5, p95 = project_final(runtime.grid)
            if not self._recovering:
                self.store.append(
                    event_id,
                    "bins",
                    {
                        "timestamp": _iso(report.timestamp),
                        "probabilities": list(report.probabilities),
                        "median": median,
                        "p5": p5,
                        "p95": p95,
                    },
                )
        return point

    # -- queries ------------------------------------------------------------

    def truth_points(
        self, event_id: str, status: str | None = None, kind: str | None = None
    ) -> list[TruthPoint]:
        runtime = self._runtime(event_id)
        points = [runtime.points[pid] for pid in runtime.point_order]
        if status:
            points = [p for p in points if p.status == status]
        if kind:
            points = [p for p in points if p.kind == kind]
        return points

    def claims(self, event_id: str, round_index: int | None = None) -> list[dict[str, Any]]:
        self._runtime(event_id)
        rows = list(self.store.read_log(event_id, "claims"))
        if round_index is not None:
            rows = [row for row in rows if row["round"] == round_index]
        return rows

    def projection(self, event_id: str) -> dict[str, Any]:
        runtime = self._runtime(event_id)
        with runtime.lock:
            grid = runtime.grid
            bins_rows = list(self.store.read_log(event_id, "bins"))
            timestamp = (
                _parse_ts(bins_rows[-1]["timestamp"]) if bins_rows else runtime.origin
            )
            report = bin_probabilities(grid, timestamp)
            median, p5, p95 = project_final(grid)
        return {
            "event_id": event_id,
            "timestamp": _iso(report.timestamp),
            "bins": [
                {
                    "low": low,
                    "high": None if high == float("inf") else high,
                    "probability": prob,
                }
                for (low, high), prob in zip(report.bins, report.probabilities)
            ],
            "median": median,
            "p5": p5,
            "p95": p95,
            "updates": runtime.bin_updates,
        }

    # -- exports -------------------------------------------------------------

    def export_report(self, event_id: str, kind: str) -> str:
        self._runtime(event_id)
        if kind == "truth_csv":
            return self._truth_csv(event_id)
        if kind == "scores_csv":
            return self._scores_csv(event_id)
        if kind == "bins_csv":
            return self._bins_csv(event_id)
        if kind == "language_csv":
            return self._language_csv(event_id)
        raise InputError(f"unknown report kind {kind!r}")

    def _truth_csv(self, event_id: str) -> str:
        runtime = self._runtime(event_id)
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["kind", "value", "earliest_timestamp", "round", "status"])
        for pid in runtime.point_order:
            point = runtime.points[pid]
            writer.writerow(
                [point.kind, point.value, _iso(point.earliest_timestamp),
                 point.round_index, point.status]
            )
        return out.getvalue()

    def _scores_csv(self, event_id: str) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            ["round", "source", "value", "xi", "r", "rho", "IS", "NIS", "D", "s",
             "kind", "verified", "post_id"]
        )
        for row in self.store.read_log(event_id, "claims"):
            writer.writerow(
                [row["round"], row["source"], row["value"], repr(row["xi"]), repr(row["r"]),
                 repr(row["rho"]), repr(row["IS"]), repr(row["NIS"]), repr(row["D"]),
                 repr(row["s"]), row["kind"], row["verified"], row["post_id"]]
            )
        return out.getvalue()

    def _bins_csv(self, event_id: str) -> str:
        from .project import FATALITY_BINS

        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["timestamp", "bin_low", "bin_high", "probability"])
        for row in self.store.read_log(event_id, "bins"):
            for (low, high), prob in zip(FATALITY_BINS, row["probabilities"]):
                writer.writerow([row["timestamp"], f"{low:g}", f"{high:g}", repr(prob)])
        return out.getvalue()

    def _language_csv(self, event_id: str) -> str:
        posts = list(self.store.read_log(event_id, "posts"))
        counts: dict[str, int] = {}
        for row in posts:
            lang = row.get("language") or "und"
            counts[lang] = counts.get(lang, 0) + 1
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["language", "count"])
        for lang, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
            writer.writerow([lang, count])
        return out.getvalue()

    # -- recovery ------------------------------------------------------------

    def _recover_all(self) -> None:
        for event_id in self.store.list_event_ids():
            self._recover_event(event_id)

    def _recover_event(self, event_id: str) -> None:
        """Rebuild runtime state by replaying the event's persisted logs."""
        record = EventRecord.from_json(self.store.read_record(event_id))
        runtime = self._build_runtime(record)
        self._recovering = True
        try:
            for row in self.store.read_log(event_id, "posts"):
                runtime.seen_ids.add(row["post_id"])
                if row.get("filtered"):
                    runtime.window_texts.append(row["text"])
            claims_by_round: dict[tuple[int, str], list[ScoredClaim]] = {}
            verified: dict[str, bool] = {}
            for row in self.store.read_log(event_id, "claims"):
                claim = CasualtyClaim(
                    post_id=row["post_id"],
                    source_account=row["source"],
                    timestamp=_parse_ts(row["timestamp"]),
                    kind=row["kind"],
                    value=row["value"],
                    confidence=row["xi"],
                )
                verified[row["post_id"]] = bool(row.get("verified"))
                claims_by_round.setdefault((row["round"], row["kind"]), []).append(
                    ScoredClaim(
                        claim=claim,
                        relevance=row["r"],
                        independence=row["rho"],
                        round_index=row["round"],
                    )
                )
            for batch_row in self.store.read_log(event_id, "batches"):
                round_index = batch_row["round"]
                for kind in KINDS:
                    outcome = run_round(
                        runtime.truth[kind],
                        claims_by_round.get((round_index, kind), []),
                        round_index,
                        verified,
                    )
                    if outcome.point is not None:
                        self._register_point(runtime, outcome.point, None)
                runtime.round_index = round_index
                if runtime.replay is not None:
                    window_end = _parse_ts(batch_row["window_end"])
                    while (
                        runtime.replay_cursor < len(runtime.replay.posts)
                        and runtime.replay.posts[runtime.replay_cursor].timestamp < window_end
                    ):
                        runtime.replay_cursor += 1
            for review_row in self.store.read_log(event_id, "reviews"):
                point = runtime.points.get(review_row["point_id"])
                if point is not None and point.status == "pending":
                    self._apply_review(runtime, point, review_row["action"], review_row["actor"])
        finally:
            self._recovering = False
        self._runtimes[event_id] = runtime
