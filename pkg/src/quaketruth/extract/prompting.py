"""Few-shot prompt assembly and delimited answer-key parsing.

A prompt is a fixed sequence of exemplar blocks followed by the target
post. The model is asked to reply with a pipe-delimited key whose segments
follow the query field order; one unique marker character designates a
missing field.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InputError
from ..ingest import EarthquakeEvent, RawPost
from .numbers import parse_count

QUERY_FIELDS = ("deaths", "injuries", "location", "city", "country", "year", "event_match")
DEFAULT_MISSING_MARKER = "∅"

_TRUE_WORDS = {"yes", "y", "true"}
_FALSE_WORDS = {"no", "n", "false"}


class KeyParseError(ValueError):
    """The model's key line cannot be read; the answer is discarded."""


@dataclass(frozen=True)
class Shot:
    text: str
    query: str
    key: str


@dataclass(frozen=True)
class PromptTemplate:
    shots: tuple[Shot, ...]
    query_fields: tuple[str, ...] = QUERY_FIELDS
    missing_marker: str = DEFAULT_MISSING_MARKER

    def __post_init__(self) -> None:
        if not self.shots:
            raise InputError("prompt template requires at least one shot")
        for shot in self.shots:
            if len(shot.key.split("|")) != len(self.query_fields):
                raise InputError(f"shot key {shot.key!r} has wrong segment count")
        if not any(self.missing_marker in shot.key for shot in self.shots):
            raise InputError("shots must cover at least one missing-field case")


@dataclass
class ExtractionAnswer:
    """Structured fields recovered from one post."""

    deaths: int | None = None
    injuries: int | None = None
    city: str | None = None
    country: str | None = None
    year: int | None = None
    event_match: bool = False
    field_confidences: dict[str, float] = field(default_factory=dict)

    def values_equal(self, other: "ExtractionAnswer") -> bool:
        """Equality over the extracted fields, ignoring confidences."""
        return (
            self.deaths == other.deaths
            and self.injuries == other.injuries
            and self.city == other.city
            and self.country == other.country
            and self.year == other.year
            and self.event_match == other.event_match
        )


def default_template() -> PromptTemplate:
    """Bundled few-shot exemplars, covering a mismatch and a missing field."""
    marker = DEFAULT_MISSING_MARKER
    shots = (
        Shot(
            text=(
                "BREAKING: Earthquake of 5.9 magnitude in Nice this morning, "
                "killing 600 and 4k injured. #France#NICE"
            ),
            query="deaths|injuries|location|Cities|Country|Year|Haiti Earthquake?",
            key="600|4000|Nice|Nice|France|2021|No",
        ),
        Shot(
            text="A lot of damage in Okay. So far 29 reported deaths.",
            query="deaths|injuries|location|Cities|Country|Year|Haiti Earthquake?",
            key=f"29|{marker}|Les Cayes|Les Cayes|Haiti|2021|Yes",
        ),
        Shot(
            text="Power is out across the city but everyone in my street is safe.",
            query="deaths|injuries|location|Cities|Country|Year|Haiti Earthquake?",
            key=f"{marker}|{marker}|{marker}|{marker}|{marker}|{marker}|Yes",
        ),
    )
    return PromptTemplate(shots=shots)


def event_query_line(template: PromptTemplate, event: EarthquakeEvent) -> str:
    """The query string with the event name in the final (match) field."""
    heads = ["deaths", "injuries", "location", "Cities", "Country", "Year"]
    return "|".join(heads + [f"{event.region_names[0]} Earthquake?"])


def build_prompt(template: PromptTemplate, post: RawPost, event: EarthquakeEvent) -> str:
    """Concatenate shots then the target post; byte-stable for fixed inputs."""
    blocks = [
        f"[Tweet]: {shot.text}\n[Query]:{shot.query}\n[Key]:{shot.key}"
        for shot in template.shots
    ]
    blocks.append(f"[Tweet]: {post.text}\n[Query]:{event_query_line(template, event)}\n[Key]:")
    return "\n\n".join(blocks)


def _parse_int_segment(segment: str) -> int | None:
    try:
        return int(segment)
    except ValueError:
        return None


def parse_key(key_line: str, template: PromptTemplate) -> ExtractionAnswer:
    """Split a key line into an answer; unconvertible numbers become absent.

    Raises :class:`KeyParseError` on a wrong segment count or an unreadable
    event-match segment (those invalidate the whole answer, not one field).
    """
    segments = [s.strip() for s in key_line.split("|")]
    if len(segments) != len(template.query_fields):
        raise KeyParseError(
            f"expected {len(template.query_fields)} segments, got {len(segments)}"
        )
    values: dict[str, str | None] = {}
    for name, segment in zip(template.query_fields, segments):
        values[name] = None if (segment == template.missing_marker or not segment) else segment

    match_raw = values["event_match"]
    if match_raw is None:
        raise KeyParseError("missing event-match segment")
    word = match_raw.casefold()
    if word in _TRUE_WORDS:
        event_match = True
    elif word in _FALSE_WORDS:
        event_match = False
    else:
        raise KeyParseError(f"unreadable event-match segment {match_raw!r}")

    year = _parse_int_segment(values["year"]) if values["year"] else None
    return ExtractionAnswer(
        deaths=parse_count(values["deaths"]) if values["deaths"] else None,
        injuries=parse_count(values["injuries"]) if values["injuries"] else None,
        city=values["city"],
        country=values["country"],
        year=year,
        event_match=event_match,
    )


def render_key(answer: ExtractionAnswer, template: PromptTemplate) -> str:
    """Inverse of :func:`parse_key` over the representable answers.

    The location segment is not carried by answers and renders as missing.
    """
    marker = template.missing_marker
    segments = [
        str(answer.deaths) if answer.deaths is not None else marker,
        str(answer.injuries) if answer.injuries is not None else marker,
        marker,
        answer.city if answer.city is not None else marker,
        answer.country if answer.country is not None else marker,
        str(answer.year) if answer.year is not None else marker,
        "Yes" if answer.event_match else "No",
    ]
    return "|".join(segments)
