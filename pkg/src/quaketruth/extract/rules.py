"""Deterministic fallback extractor: counts near casualty lexemes.

No model backend required. A count token claims a kind (deaths/injuries)
when it sits within a three-token window of a lexeme of that kind; among
several matches the one nearest a lexeme wins, ties breaking to the first
occurrence. This extractor cannot resolve cross-sentence attribution (a
later hurricane's toll in the same post can shadow the quake's); the truth
layer is the corrective for that.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path

from ..ingest import EarthquakeEvent, RawPost
from .numbers import parse_count
from .prompting import ExtractionAnswer

RULE_CONFIDENCE = 0.6
TOKEN_WINDOW = 3

_TOKEN_RE = re.compile(
    r"\d{1,3}(?:,\d{3})+"  # grouped thousands
    r"|\d+(?:\.\d+)?[kKmM]?"  # digits, optional decimal/suffix
    r"|[^\W\d_]+"  # words (unicode letters)
    r"|[一-鿿]",  # CJK, one char per token
    re.UNICODE,
)

_CJK_RE = re.compile(r"[一-鿿]")


def _tokenize(text: str) -> list[tuple[str, int]]:
    """Tokens with their character offsets; CJK splits per character."""
    tokens: list[tuple[str, int]] = []
    for match in _TOKEN_RE.finditer(text):
        token = match.group(0)
        if len(token) > 1 and _CJK_RE.fullmatch(token[0]):
            for i, ch in enumerate(token):
                tokens.append((ch, match.start() + i))
        else:
            tokens.append((token, match.start()))
    return tokens


class Lexicon:
    """Casualty lexemes per kind, loaded from ``language,kind,lexeme`` CSV."""

    def __init__(self, lexemes: dict[str, list[str]]):
        self.lexemes = {kind: sorted(set(items)) for kind, items in lexemes.items()}

    @classmethod
    def from_csv(cls, path: str | Path) -> "Lexicon":
        lexemes: dict[str, list[str]] = {"deaths": [], "injuries": []}
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                lexemes.setdefault(row["kind"].strip(), []).append(row["lexeme"].strip())
        return cls(lexemes)

    def occurrences(self, text: str, kind: str) -> list[int]:
        """Character offsets of every lexeme of ``kind`` in the text."""
        folded = text.casefold()
        offsets: list[int] = []
        for lexeme in self.lexemes.get(kind, []):
            needle = lexeme.casefold()
            if _CJK_RE.search(needle):
                start = folded.find(needle)
                while start >= 0:
                    offsets.append(start)
                    start = folded.find(needle, start + 1)
            else:
                for match in re.finditer(rf"(?<!\w){re.escape(needle)}(?!\w)", folded):
                    offsets.append(match.start())
        return sorted(offsets)


class Gazetteer:
    """Place-alias lookup from ``name,city,country`` CSV rows."""

    def __init__(self, entries: list[tuple[str, str, str]]):
        self.entries = entries

    @classmethod
    def from_csv(cls, path: str | Path) -> "Gazetteer":
        entries: list[tuple[str, str, str]] = []
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                entries.append((row["name"].strip(), row["city"].strip(), row["country"].strip()))
        return cls(entries)

    def lookup(self, text: str) -> tuple[str, str] | None:
        """Earliest gazetteer name appearing in the text, as (city, country).

        Latin-script names must appear capitalized as written (proper-noun
        heuristic); CJK names match as substrings.
        """
        best: tuple[int, str, str] | None = None
        for name, city, country in self.entries:
            if _CJK_RE.search(name):
                pos = text.find(name)
            else:
                match = re.search(rf"(?<!\w){re.escape(name)}(?!\w)", text)
                pos = match.start() if match else -1
            if pos >= 0 and (best is None or pos < best[0]):
                best = (pos, city, country)
        if best is None:
            return None
        return best[1], best[2]


def _token_index_at(tokens: list[tuple[str, int]], offset: int) -> int:
    """Index of the token containing (or nearest before) a char offset."""
    idx = 0
    for i, (_, start) in enumerate(tokens):
        if start <= offset:
            idx = i
        else:
            break
    return idx


def _best_count(
    tokens: list[tuple[str, int]], lexeme_offsets: list[int]
) -> int | None:
    """Nearest-lexeme count among tokens within the window; ties go first."""
    if not lexeme_offsets:
        return None
    lexeme_idx = [_token_index_at(tokens, off) for off in lexeme_offsets]
    best: tuple[int, int, int] | None = None  # (distance, position, value)
    for i, (token, _) in enumerate(tokens):
        value = parse_count(token)
        if value is None:
            continue
        distance = min(abs(i - j) for j in lexeme_idx)
        if distance > TOKEN_WINDOW:
            continue
        if best is None or (distance, i) < (best[0], best[1]):
            best = (distance, i, value)
    return best[2] if best else None


def extract_rules(
    post: RawPost,
    event: EarthquakeEvent,
    lexicon: Lexicon,
    gazetteer: Gazetteer | None = None,
) -> ExtractionAnswer | None:
    """Pattern-rule extraction; total and deterministic, never raises.

    Returns None when no casualty count is found. Confidence is fixed low so
    model-backed answers dominate when both paths run.
    """
    tokens = _tokenize(post.text)
    deaths = _best_count(tokens, lexicon.occurrences(post.text, "deaths"))
    injuries = _best_count(tokens, lexicon.occurrences(post.text, "injuries"))
    if deaths is None and injuries is None:
        return None
    place = gazetteer.lookup(post.text) if gazetteer else None
    city, country = place if place else (None, None)
    confidences = {name: RULE_CONFIDENCE for name in (
        "deaths", "injuries", "location", "city", "country", "year", "event_match"
    )}
    return ExtractionAnswer(
        deaths=deaths,
        injuries=injuries,
        city=city,
        country=country,
        year=event.year,
        event_match=True,  # rule path runs only on stage-1 survivors
        field_confidences=confidences,
    )
