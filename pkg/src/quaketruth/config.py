"""Pipeline configuration: defaults, TOML file loading, environment lookups.

Endpoint URLs and credentials are environment-driven (``QT_*`` variables) so
the same config file works against live APIs and against the bundled mock
servers.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigurationError

ENV_SOCIAL_URL = "QT_SOCIAL_URL"
ENV_SOCIAL_TOKEN = "QT_SOCIAL_TOKEN"
ENV_NEWS_URL = "QT_NEWS_URL"
ENV_NEWS_TOKEN = "QT_NEWS_TOKEN"
ENV_LLM_URL = "QT_LLM_URL"
ENV_CLASSIFIER_URL = "QT_CLASSIFIER_URL"
ENV_API_TOKEN = "QT_API_TOKEN"


@dataclass(frozen=True)
class PriorSpec:
    """Per-event prior over the loss model parameters."""

    median_deaths: float = 100.0
    dispersion_log10: float = 1.0
    sigma_obs: float = 0.2


@dataclass(frozen=True)
class PipelineConfig:
    """Immutable snapshot of every tunable the pipeline reads."""

    trigger_threshold: float = 5.5
    cadence_minutes: int = 30
    social_cap: int = 10_000
    news_cap: int = 100
    classifier_backend: str = "baseline"  # baseline | remote
    classifier_seed: int = 7
    extractor: str = "rules"  # rules | llm
    beam_width: int = 4
    max_tokens: int = 64
    confidence_low: float = 0.5
    confidence_high: float = 1.0
    max_inflight_requests: int = 4
    independence_window: int = 2000
    auto_approve: bool = False
    pre_event_hours: float = 24.0
    data_dir: str = "./quaketruth-data"
    # resource paths; empty string means the bundled fixture
    corpus_dir: str = ""
    lexicon_path: str = ""
    gazetteer_path: str = ""
    keywords_path: str = ""
    prior: PriorSpec = field(default_factory=PriorSpec)

    def __post_init__(self) -> None:
        if self.cadence_minutes <= 0:
            raise ConfigurationError("cadence_minutes must be positive")
        if not 0.0 <= self.confidence_low <= self.confidence_high <= 1.0:
            raise ConfigurationError("confidence range must satisfy 0 <= low <= high <= 1")
        if self.beam_width < 1:
            raise ConfigurationError("beam_width must be >= 1")
        if self.classifier_backend not in ("baseline", "remote"):
            raise ConfigurationError(f"unknown classifier backend {self.classifier_backend!r}")
        if self.extractor not in ("rules", "llm"):
            raise ConfigurationError(f"unknown extractor {self.extractor!r}")


def load_config(path: str | Path | None = None, **overrides: Any) -> PipelineConfig:
    """Build a config from an optional TOML file plus keyword overrides.

    The file layout mirrors the dataclasses: top-level ``[pipeline]`` table
    and an optional ``[prior]`` table.
    """
    values: dict[str, Any] = {}
    if path is not None:
        raw = Path(path)
        if not raw.exists():
            raise ConfigurationError(f"config file not found: {raw}")
        with open(raw, "rb") as fh:
            doc = tomllib.load(fh)
        values.update(doc.get("pipeline", {}))
        if "prior" in doc:
            values["prior"] = PriorSpec(**doc["prior"])
    values.update(overrides)

    known = {f.name for f in fields(PipelineConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    if "confidence_range" in overrides:
        lo, hi = overrides.pop("confidence_range")
        values["confidence_low"], values["confidence_high"] = lo, hi
    return PipelineConfig(**values)


def with_prior(config: PipelineConfig, payload: dict[str, Any]) -> PipelineConfig:
    """Apply the per-event prior keys from a registration payload."""
    spec = config.prior
    if "prior_median_deaths" in payload:
        spec = replace(spec, median_deaths=float(payload["prior_median_deaths"]))
    if "prior_dispersion_log10" in payload:
        spec = replace(spec, dispersion_log10=float(payload["prior_dispersion_log10"]))
    if "sigma_obs" in payload:
        spec = replace(spec, sigma_obs=float(payload["sigma_obs"]))
    return replace(config, prior=spec)


def env_url(name: str) -> str | None:
    value = os.environ.get(name, "").strip()
    return value or None
