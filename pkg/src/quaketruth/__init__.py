"""Streaming discovery of earthquake casualty counts from crowdsourced posts.

The pipeline stages live in their own modules: :mod:`quaketruth.ingest`
(acquisition and replay), :mod:`quaketruth.classify` (two-stage relevance
filter), :mod:`quaketruth.extract` (structured claim extraction),
:mod:`quaketruth.truth` (constraint-aware truth discovery) and
:mod:`quaketruth.project` (loss projection over fatality bins).
:mod:`quaketruth.api` exposes everything over HTTP; :mod:`quaketruth.cli`
is a thin client of that API.
"""

__version__ = "0.1.0"

SCHEMA_VERSION = "1"
