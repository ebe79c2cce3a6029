"""Bundled mock servers: source search, completion backend, classifier.

Tests (and offline demos) mount these apps through httpx's ASGI transport;
``quaketruth serve`` talks to the same protocols against real endpoints.
"""

from __future__ import annotations

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Sequence

from fastapi import FastAPI, Request, Response


def create_source_app(
    records: Sequence[dict[str, Any]], token: str | None = None
) -> FastAPI:
    """Serves replay-format records filtered by the requested window."""
    app = FastAPI(title="mock-source")

    @app.post("/search")
    async def search(request: Request) -> Response:
        if token and request.headers.get("Authorization") != f"Bearer {token}":
            return Response(status_code=401)
        body = await request.json()
        start = datetime.fromisoformat(body["window_start"])
        end = datetime.fromisoformat(body["window_end"])
        hits = [
            record
            for record in records
            if start <= datetime.fromisoformat(record["timestamp"].replace("Z", "+00:00")) < end
        ]
        limit = int(body.get("limit") or len(hits))
        return Response(
            content=json.dumps({"posts": hits[:limit]}), media_type="application/json"
        )

    return app


def canned_completion(
    key: str, prob: float = 0.9, separator_prob: float | None = None
) -> dict[str, Any]:
    """Build a completion body whose tokens are the key's segments."""
    tokens: list[dict[str, Any]] = []
    segments = key.split("|")
    probs = list(prob) if isinstance(prob, (list, tuple)) else [prob] * len(segments)
    if separator_prob is None:
        separator_prob = max(probs)
    for index, segment in enumerate(segments):
        tokens.append({"token": segment, "prob": probs[index]})
        if index < len(segments) - 1:
            tokens.append({"token": "|", "prob": separator_prob})
    return {"text": key, "token_probs": tokens}


def create_completion_app(
    canned: dict[str, dict[str, Any]], fallback: dict[str, Any] | None = None
) -> FastAPI:
    """Replays canned completions keyed by the prompt's final [Tweet] text."""
    app = FastAPI(title="mock-completion")

    @app.post("/complete")
    async def complete(request: Request) -> dict[str, Any]:
        body = await request.json()
        prompt: str = body["prompt"]
        tweet = prompt.rsplit("[Tweet]: ", 1)[-1].split("\n[Query]", 1)[0]
        hit = canned.get(tweet)
        if hit is None:
            hit = fallback or {"text": "", "token_probs": []}
        return hit

    return app


def load_canned_completions(path: str | Path) -> dict[str, dict[str, Any]]:
    """Canned file format: ``{tweet_text: {"key": ..., "prob": ...}}``."""
    doc = json.loads(Path(path).read_text("utf-8"))
    return {
        tweet: canned_completion(entry["key"], entry.get("prob", 0.9))
        for tweet, entry in doc.items()
    }


def create_classifier_app(score: Callable[[str], float]) -> FastAPI:
    """Remote-classifier protocol: texts in, positive probabilities out."""
    app = FastAPI(title="mock-classifier")

    @app.post("/classify")
    async def classify(request: Request) -> dict[str, Any]:
        body = await request.json()
        return {"probabilities": [score(text) for text in body["texts"]]}

    return app
