"""Append-only, per-event persistence.

Every event owns a directory of line-delimited JSON logs (posts, claims,
batches, truth points, reviews, projection updates) plus a registration
record. Recovery is log replay; nothing is ever rewritten in place, which
is what makes replayed runs diffable end to end.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterator

from .errors import StateError

LOG_NAMES = ("posts", "claims", "batches", "truth_points", "reviews", "bins", "errors")


class EventStore:
    def __init__(self, data_dir: str | Path):
        self.root = Path(data_dir)
        self.events_dir = self.root / "events"
        self.events_dir.mkdir(parents=True, exist_ok=True)

    def event_dir(self, event_id: str) -> Path:
        return self.events_dir / event_id

    def exists(self, event_id: str) -> bool:
        return (self.event_dir(event_id) / "event.json").exists()

    def list_event_ids(self) -> list[str]:
        return sorted(
            p.parent.name for p in self.events_dir.glob("*/event.json")
        )

    def write_record(self, event_id: str, record: dict[str, Any]) -> None:
        directory = self.event_dir(event_id)
        if (directory / "event.json").exists():
            raise StateError(f"event {event_id} already registered")
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "event.json").write_text(
            json.dumps(record, ensure_ascii=False, indent=2), encoding="utf-8"
        )

    def read_record(self, event_id: str) -> dict[str, Any]:
        return json.loads((self.event_dir(event_id) / "event.json").read_text("utf-8"))

    def append(self, event_id: str, log_name: str, entry: dict[str, Any]) -> None:
        if log_name not in LOG_NAMES:
            raise StateError(f"unknown log {log_name!r}")
        path = self.event_dir(event_id) / f"{log_name}.jsonl"
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, ensure_ascii=False) + "\n")

    def read_log(self, event_id: str, log_name: str) -> Iterator[dict[str, Any]]:
        path = self.event_dir(event_id) / f"{log_name}.jsonl"
        if not path.exists():
            return iter(())
        return (json.loads(line) for line in path.read_text("utf-8").splitlines() if line)
