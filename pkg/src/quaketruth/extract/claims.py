"""Claim validation: answers become per-kind casualty claims or nothing."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from ..errors import InputError
from ..ingest import EarthquakeEvent, RawPost
from .prompting import ExtractionAnswer

_EPS = 1e-6

KINDS = ("deaths", "injuries")


@dataclass(frozen=True)
class CasualtyClaim:
    """One (post, kind) assertion of a casualty count."""

    post_id: str
    source_account: str
    timestamp: datetime
    kind: str
    value: int
    confidence: float  # extraction confidence, open interval (0, 1)
    place: tuple[str | None, str | None] | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise InputError(f"unknown claim kind {self.kind!r}")
        if self.value < 0:
            raise InputError("claim value must be non-negative")
        if not 0.0 < self.confidence < 1.0:
            raise InputError("confidence must lie in (0, 1)")


def _clamp_confidence(value: float) -> float:
    return min(max(value, _EPS), 1.0 - _EPS)


def validate_claim(
    answer: ExtractionAnswer, event: EarthquakeEvent, post: RawPost
) -> list[CasualtyClaim]:
    """Drop answers that point at a different event; emit per-kind claims.

    An answer is rejected outright when its event-match is negative, its
    year disagrees with the event, or its country falls outside the event's
    region set. Unknown place strings pass through untouched.
    """
    if not answer.event_match:
        return []
    if answer.year is not None and answer.year != event.year:
        return []
    if answer.country is not None and answer.country.casefold() not in event.region_set():
        return []
    place = (answer.city, answer.country) if (answer.city or answer.country) else None
    claims: list[CasualtyClaim] = []
    for kind, value in (("deaths", answer.deaths), ("injuries", answer.injuries)):
        if value is None:
            continue
        claims.append(
            CasualtyClaim(
                post_id=post.post_id,
                source_account=post.source_account,
                timestamp=post.timestamp,
                kind=kind,
                value=value,
                confidence=_clamp_confidence(answer.field_confidences.get(kind, 0.5)),
                place=place,
            )
        )
    return claims
