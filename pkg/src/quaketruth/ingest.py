"""Event-triggered acquisition of crowdsourced posts.

Posts arrive either from live HTTP sources (social/news search endpoints)
or from replay files; both paths produce the same :class:`RawPost` stream so
everything downstream is source-agnostic.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import httpx

from .errors import ConfigurationError, FormatError, InputError, RetryableSourceError

REPLAY_FIELDS = (
    "post_id",
    "source_account",
    "platform",
    "verified",
    "timestamp",
    "language",
    "text",
    "is_forward",
    "cited_links",
)

PLATFORMS = ("social", "news")


@dataclass(frozen=True)
class EarthquakeEvent:
    """A triggering earthquake, as delivered by an alerting feed."""

    event_id: str
    magnitude: float
    region_names: tuple[str, ...]
    origin_time: datetime
    trigger_threshold_met: bool = False

    def __post_init__(self) -> None:
        if self.magnitude <= 0:
            raise InputError("magnitude must be positive")
        if not self.region_names:
            raise InputError("region_names must be non-empty")
        if self.origin_time.tzinfo is None:
            raise InputError("origin_time must be timezone-aware UTC")

    @property
    def year(self) -> int:
        return self.origin_time.year

    def region_set(self) -> set[str]:
        return {name.casefold() for name in self.region_names}


@dataclass(frozen=True)
class TriggerConfig:
    magnitude_threshold: float = 5.5


@dataclass(frozen=True)
class QuerySpec:
    """One upstream search: keywords over a half-hour window."""

    keywords: tuple[str, ...]
    window_start: datetime
    window_end: datetime
    source: str  # social | news
    language_hint: str | None = None

    def __post_init__(self) -> None:
        if not self.keywords:
            raise InputError("keywords must be non-empty")
        if self.window_start >= self.window_end:
            raise InputError("window_start must precede window_end")
        if self.source not in PLATFORMS:
            raise InputError(f"unknown source {self.source!r}")


@dataclass(frozen=True)
class RawPost:
    """One crowdsourced text item, normalized across platforms."""

    post_id: str
    source_account: str
    platform: str
    verified: bool
    timestamp: datetime
    language: str
    text: str
    cited_links: tuple[str, ...] = ()
    is_forward: bool = False

    def __post_init__(self) -> None:
        if not self.text:
            raise InputError("post text must be non-empty")
        if self.platform not in PLATFORMS:
            raise InputError(f"unknown platform {self.platform!r}")


def should_trigger(event: EarthquakeEvent, config: TriggerConfig) -> bool:
    """Magnitude gate for pipeline activation; the threshold is inclusive."""
    return event.magnitude >= config.magnitude_threshold


class KeywordDictionary:
    """Per-language disaster/casualty search terms loaded from CSV.

    CSV columns: ``language,term_type,term`` with term_type one of
    ``disaster`` or ``casualty``.
    """

    def __init__(self, terms: dict[str, dict[str, list[str]]]):
        if not any(terms.values()):
            raise ConfigurationError("keyword dictionary is empty")
        self._terms = terms

    @classmethod
    def from_csv(cls, path: str | Path) -> "KeywordDictionary":
        terms: dict[str, dict[str, list[str]]] = {}
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                lang = row["language"].strip()
                bucket = terms.setdefault(lang, {"disaster": [], "casualty": []})
                bucket.setdefault(row["term_type"].strip(), []).append(row["term"].strip())
        return cls(terms)

    @property
    def languages(self) -> list[str]:
        return sorted(self._terms)

    def terms_for(self, language: str, term_type: str) -> list[str]:
        return list(self._terms.get(language, {}).get(term_type, []))

    def restricted(self, languages: Sequence[str]) -> "KeywordDictionary":
        kept = {lang: buckets for lang, buckets in self._terms.items() if lang in languages}
        return KeywordDictionary(kept)


def generate_queries(
    event: EarthquakeEvent,
    dictionary: KeywordDictionary,
    window_start: datetime | None = None,
    window_end: datetime | None = None,
    cadence_minutes: int = 30,
    sources: Sequence[str] = PLATFORMS,
) -> list[QuerySpec]:
    """Cross region names with per-language disaster terms, tiling time.

    Defaults to the single half-hour window starting at the event origin.
    One spec per (source, language, window); every spec's keywords carry the
    event's region names so upstream search scopes to the right quake.
    """
    if window_start is None:
        window_start = event.origin_time
    if window_end is None:
        window_end = window_start + timedelta(minutes=cadence_minutes)
    specs: list[QuerySpec] = []
    step = timedelta(minutes=cadence_minutes)
    for source in sources:
        for lang in dictionary.languages:
            terms = dictionary.terms_for(lang, "disaster") + dictionary.terms_for(lang, "casualty")
            if not terms:
                continue
            keywords = tuple(terms) + tuple(event.region_names)
            cursor = window_start
            while cursor < window_end:
                specs.append(
                    QuerySpec(
                        keywords=keywords,
                        window_start=cursor,
                        window_end=min(cursor + step, window_end),
                        source=source,
                        language_hint=lang,
                    )
                )
                cursor += step
    if not specs:
        raise ConfigurationError("keyword dictionary produced no query terms")
    return specs


def _parse_timestamp(value: str) -> datetime:
    ts = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        raise ValueError("naive timestamp")
    return ts.astimezone(timezone.utc)


def _post_from_record(record: dict) -> RawPost:
    missing = [name for name in REPLAY_FIELDS if name not in record]
    if missing:
        raise ValueError(f"missing fields: {missing}")
    links = record["cited_links"]
    if isinstance(links, str):
        links = [links] if links else []
    return RawPost(
        post_id=str(record["post_id"]),
        source_account=str(record["source_account"]),
        platform=record["platform"],
        verified=bool(record["verified"]),
        timestamp=_parse_timestamp(record["timestamp"]),
        language=str(record["language"]) or "und",
        text=record["text"],
        cited_links=tuple(links),
        is_forward=bool(record["is_forward"]),
    )


@dataclass
class ReplayLoad:
    """Replay file contents: posts sorted by timestamp plus a skip count."""

    posts: list[RawPost]
    skipped: int = 0

    def __iter__(self) -> Iterator[RawPost]:
        return iter(self.posts)

    def __len__(self) -> int:
        return len(self.posts)


def load_replay(path: str | Path) -> ReplayLoad:
    """Read a line-delimited replay file, sorting stably by timestamp.

    Malformed lines are counted and skipped; more than 10% malformed is a
    format error (the file is probably not in the replay format at all).
    """
    try:
        raw_lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise FormatError(f"cannot read replay file {path}: {exc}") from exc
    posts: list[RawPost] = []
    skipped = 0
    total = 0
    for line in raw_lines:
        if not line.strip():
            continue
        total += 1
        try:
            posts.append(_post_from_record(json.loads(line)))
        except (ValueError, KeyError, InputError):
            skipped += 1
    if total and skipped / total > 0.10:
        raise FormatError(f"{skipped}/{total} malformed lines in {path}")
    posts.sort(key=lambda p: p.timestamp)
    return ReplayLoad(posts=posts, skipped=skipped)


class SourceClient:
    """HTTP client for one upstream source (live API or bundled mock).

    Speaks a minimal JSON protocol: ``POST /search`` with the query fields,
    response ``{"posts": [...]}`` in replay-record form.
    """

    def __init__(
        self,
        base_url: str,
        platform: str,
        token: str | None = None,
        cap: int | None = None,
        transport: httpx.BaseTransport | None = None,
        timeout: float = 30.0,
    ):
        if platform not in PLATFORMS:
            raise ConfigurationError(f"unknown platform {platform!r}")
        self.platform = platform
        self.cap = cap if cap is not None else (10_000 if platform == "social" else 100)
        headers = {"Authorization": f"Bearer {token}"} if token else {}
        self._http = httpx.Client(
            base_url=base_url, headers=headers, transport=transport, timeout=timeout
        )

    def close(self) -> None:
        self._http.close()

    def search(self, spec: QuerySpec) -> list[dict]:
        payload = {
            "keywords": list(spec.keywords),
            "window_start": spec.window_start.isoformat(),
            "window_end": spec.window_end.isoformat(),
            "language": spec.language_hint,
            "limit": self.cap,
        }
        try:
            response = self._http.post("/search", json=payload)
        except httpx.HTTPError as exc:
            raise RetryableSourceError(f"source request failed: {exc}") from exc
        if response.status_code in (401, 403):
            raise ConfigurationError(f"source auth failure ({response.status_code})")
        if response.status_code == 429:
            retry_after = float(response.headers.get("Retry-After", 60))
            raise RetryableSourceError("rate limited", retry_after=retry_after)
        if response.status_code >= 500:
            raise RetryableSourceError(f"source unavailable ({response.status_code})")
        response.raise_for_status()
        return response.json().get("posts", [])


def fetch_batch(client: SourceClient, spec: QuerySpec) -> list[RawPost]:
    """Fetch one window of posts, capped per source and mapped to RawPost."""
    posts: list[RawPost] = []
    for record in client.search(spec)[: client.cap]:
        record = dict(record)
        record.setdefault("platform", client.platform)
        record["platform"] = client.platform
        try:
            posts.append(_post_from_record(record))
        except (ValueError, KeyError, InputError):
            continue  # upstream garbage is dropped, not fatal
    return posts


def dedup_exact(batch: Iterable[RawPost], seen_ids: set[str] | None = None) -> list[RawPost]:
    """Drop posts whose post_id was already stored or repeats in the batch.

    Pure with respect to ``seen_ids``: the caller records kept ids after
    persisting, which is what makes this idempotent.
    """
    seen = set(seen_ids) if seen_ids else set()
    kept: list[RawPost] = []
    for post in batch:
        if post.post_id in seen:
            continue
        seen.add(post.post_id)
        kept.append(post)
    return kept


def language_histogram(posts: Iterable[RawPost]) -> dict[str, int]:
    """Count posts per platform-reported language, bucketing unknowns."""
    counts: dict[str, int] = {}
    for post in posts:
        lang = post.language if post.language else "und"
        counts[lang] = counts.get(lang, 0) + 1
    return counts
