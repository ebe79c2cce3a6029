"""Structured casualty-claim extraction from filtered posts.

Two interchangeable paths produce :class:`ExtractionAnswer` objects: a
few-shot prompt against an external completion backend
(:mod:`.completion`), and a deterministic rule extractor (:mod:`.rules`)
so the pipeline runs with no model server at all. :mod:`.claims` validates
answers against the event and emits claims.
"""

from .claims import CasualtyClaim, validate_claim
from .completion import CompletionClient, extract_llm, extract_llm_batch
from .numbers import parse_count
from .prompting import (
    ExtractionAnswer,
    KeyParseError,
    PromptTemplate,
    Shot,
    build_prompt,
    default_template,
    parse_key,
    render_key,
)
from .rules import Gazetteer, Lexicon, extract_rules

__all__ = [
    "CasualtyClaim",
    "CompletionClient",
    "ExtractionAnswer",
    "Gazetteer",
    "KeyParseError",
    "Lexicon",
    "PromptTemplate",
    "Shot",
    "build_prompt",
    "default_template",
    "extract_llm",
    "extract_llm_batch",
    "extract_rules",
    "parse_count",
    "parse_key",
    "render_key",
    "validate_claim",
]
