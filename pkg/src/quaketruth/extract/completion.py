"""Client for an external completion backend with per-token probabilities.

Protocol: ``POST /complete`` with ``{prompt, beam_width, max_tokens,
return_token_probs: true}``; the backend answers ``{text, token_probs:
[{token, prob}, ...]}`` where the token strings concatenate to the text.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import httpx

from ..errors import RetryableSourceError
from ..ingest import EarthquakeEvent, RawPost
from .prompting import (
    ExtractionAnswer,
    KeyParseError,
    PromptTemplate,
    build_prompt,
    parse_key,
)


class CompletionClient:
    def __init__(
        self,
        base_url: str,
        beam_width: int = 4,
        max_tokens: int = 64,
        max_inflight: int = 4,
        transport: httpx.BaseTransport | None = None,
        timeout: float = 60.0,
    ):
        self.beam_width = beam_width
        self.max_tokens = max_tokens
        self.max_inflight = max_inflight
        self._http = httpx.Client(base_url=base_url, transport=transport, timeout=timeout)

    def close(self) -> None:
        self._http.close()

    def complete(self, prompt: str) -> tuple[str, list[tuple[str, float]]]:
        payload = {
            "prompt": prompt,
            "beam_width": self.beam_width,
            "max_tokens": self.max_tokens,
            "return_token_probs": True,
        }
        try:
            response = self._http.post("/complete", json=payload)
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise RetryableSourceError(f"completion backend failed: {exc}") from exc
        body = response.json()
        token_probs = [(tp["token"], float(tp["prob"])) for tp in body.get("token_probs", [])]
        return body.get("text", ""), token_probs


def _key_region(text: str) -> str:
    """First key line of the completion (the prompt already ends '[Key]:')."""
    if "[Key]:" in text:
        text = text.split("[Key]:", 1)[1]
    return text.splitlines()[0] if text else ""


def _field_confidences(
    text: str,
    token_probs: list[tuple[str, float]],
    key_line: str,
    field_names: Sequence[str],
) -> dict[str, float]:
    """Mean token probability per key segment.

    Each character inherits its token's probability; a segment's confidence
    averages the distinct tokens that overlap it. Missing probability data
    degrades to zero confidence so the acceptance gate rejects the answer.
    """
    char_token: list[int] = []
    probs: list[float] = []
    for idx, (token, prob) in enumerate(token_probs):
        probs.append(prob)
        char_token.extend([idx] * len(token))
    joined = "".join(t for t, _ in token_probs)
    key_start = joined.find(key_line)
    if key_start < 0 or len(char_token) < key_start + len(key_line):
        return {name: 0.0 for name in field_names}

    confidences: dict[str, float] = {}
    cursor = key_start
    for name, segment in zip(field_names, key_line.split("|")):
        span = range(cursor, cursor + len(segment))
        tokens = {char_token[i] for i in span if i < len(char_token)}
        if not tokens:  # empty segment: fall back to the separator's token
            tokens = {char_token[min(cursor, len(char_token) - 1)]}
        confidences[name] = sum(probs[t] for t in tokens) / len(tokens)
        cursor += len(segment) + 1
    return confidences


def extract_llm(
    client: CompletionClient,
    template: PromptTemplate,
    post: RawPost,
    event: EarthquakeEvent,
    confidence_range: tuple[float, float] = (0.5, 1.0),
) -> ExtractionAnswer | None:
    """Run the few-shot prompt and parse the keyed answer.

    The whole answer is discarded when any field's mean token probability
    falls outside the acceptance range, or when the key cannot be parsed.
    """
    prompt = build_prompt(template, post, event)
    text, token_probs = client.complete(prompt)
    key_line = _key_region(text)
    if not key_line:
        return None
    try:
        answer = parse_key(key_line, template)
    except KeyParseError:
        return None
    confidences = _field_confidences(text, token_probs, key_line, template.query_fields)
    low, high = confidence_range
    if any(not (low <= c <= high) for c in confidences.values()):
        return None
    answer.field_confidences = confidences
    return answer


def extract_llm_batch(
    client: CompletionClient,
    template: PromptTemplate,
    posts: Sequence[RawPost],
    event: EarthquakeEvent,
    confidence_range: tuple[float, float] = (0.5, 1.0),
) -> list[ExtractionAnswer | None]:
    """Extract a batch concurrently, bounding in-flight requests, in order."""
    if not posts:
        return []
    with ThreadPoolExecutor(max_workers=client.max_inflight) as pool:
        futures = [
            pool.submit(extract_llm, client, template, post, event, confidence_range)
            for post in posts
        ]
        return [f.result() for f in futures]
