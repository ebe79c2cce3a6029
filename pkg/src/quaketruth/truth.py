"""Physical-constraint-aware dynamic truth discovery.

Each round fuses that round's scored claims into a distribution over
candidate casualty values. Per-claim credibility is confidence x relevance
x independence, summed into an information score per (source, value);
scores are max-normalized, pruned by the monotone-casualty constraint,
fed through a sigmoid consensus, and weighted by source reliabilities
accumulated over all rounds. The argmax is the round's estimate; a change
of estimate emits a truth point stamped with the earliest post that
reported the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from datetime import datetime
from typing import Iterable, Sequence

from .errors import InputError
from .extract import CasualtyClaim

RELIABILITY_EPS = 1e-6
_REL_CLAMP = 1e-6  # keeps relevance in the open interval (0, 1)


# ---------------------------------------------------------------------------
# per-claim scores


def normalize_text(text: str) -> str:
    return " ".join(text.casefold().split())


def text_shingles(text: str, n: int = 3) -> frozenset[str]:
    normalized = normalize_text(text)
    if len(normalized) < n:
        return frozenset({normalized})
    return frozenset(normalized[i : i + n] for i in range(len(normalized) - n + 1))


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def independence_score(is_forward: bool, text: str, window: Iterable[str]) -> float:
    """1 minus the strongest shingle overlap with earlier posts.

    Platform-marked forwards and exact normalized duplicates score zero;
    the first post of an event scores one.
    """
    if is_forward:
        return 0.0
    normalized = normalize_text(text)
    own = text_shingles(text)
    best = 0.0
    for earlier in window:
        if normalize_text(earlier) == normalized:
            return 0.0
        best = max(best, jaccard(own, text_shingles(earlier)))
    return min(max(1.0 - best, 0.0), 1.0)


def relevance_score(event_prob: float, stats_prob: float, match_conf: float) -> float:
    """Product of classifier and answer-match probabilities, kept in (0, 1)."""
    for value in (event_prob, stats_prob, match_conf):
        if not 0.0 <= value <= 1.0:
            raise InputError("relevance inputs must lie in [0, 1]")
    product = event_prob * stats_prob * match_conf
    return min(max(product, _REL_CLAMP), 1.0 - _REL_CLAMP)


# ---------------------------------------------------------------------------
# round tables


@dataclass(frozen=True)
class ScoredClaim:
    """A casualty claim with its credibility triple attached."""

    claim: CasualtyClaim
    relevance: float
    independence: float
    round_index: int

    def __post_init__(self) -> None:
        if not 0.0 < self.relevance < 1.0:
            raise InputError("relevance must lie in (0, 1)")
        if not 0.0 <= self.independence <= 1.0:
            raise InputError("independence must lie in [0, 1]")

    @property
    def weight(self) -> float:
        return self.claim.confidence * self.relevance * self.independence


@dataclass
class ScoreTable:
    """Information scores for one round, keyed by (source, value)."""

    round_index: int
    entries: dict[tuple[str, int], float] = dataclass_field(default_factory=dict)
    nis: dict[tuple[str, int], float] = dataclass_field(default_factory=dict)

    def values(self) -> set[int]:
        return {k for (_, k) in self.entries}

    def sources(self) -> set[str]:
        return {i for (i, _) in self.entries}

    def claimants(self, value: int) -> set[str]:
        return {i for (i, k), score in self.entries.items() if k == value and score > 0}


def information_scores(claims: Sequence[ScoredClaim]) -> ScoreTable:
    """Sum confidence x relevance x independence per (source, value).

    Zero-weight claims (forwards, duplicates) contribute nothing and leave
    no entry, so removing such a post is indistinguishable from scoring it.
    """
    if not claims:
        return ScoreTable(round_index=0)
    rounds = {c.round_index for c in claims}
    kinds = {c.claim.kind for c in claims}
    if len(rounds) != 1 or len(kinds) != 1:
        raise InputError("information_scores expects one round and one kind")
    table = ScoreTable(round_index=rounds.pop())
    for scored in claims:
        weight = scored.weight
        if weight <= 0.0:
            continue
        key = (scored.claim.source_account, scored.claim.value)
        table.entries[key] = table.entries.get(key, 0.0) + weight
    return table


def normalize_scores(table: ScoreTable) -> ScoreTable:
    """Scale scores to [0, 1] by the round's global maximum entry."""
    peak = max(table.entries.values(), default=0.0)
    table.nis = {
        key: (score / peak if peak > 0 else 0.0) for key, score in table.entries.items()
    }
    return table


def apply_physical_constraints(
    table: ScoreTable, p_prev: dict[int, float]
) -> tuple[ScoreTable, dict[int, float]]:
    """Remove impossible transitions and derive per-value probability caps.

    Casualty counts cannot decrease: a value whose previous-round prefix
    (all candidates <= it) carries zero probability is unreachable, so its
    entries are deleted. Every surviving value gets the prefix maximum as an
    upper bound on its new probability. First round: nothing to constrain.
    """
    if not p_prev:
        return table, {}
    bounds: dict[int, float] = {}
    for value in sorted(table.values()):
        prefix = [p for prev_value, p in p_prev.items() if prev_value <= value]
        bound = max(prefix, default=0.0)
        if bound <= 0.0:
            for key in [key for key in table.entries if key[1] == value]:
                del table.entries[key]
                table.nis.pop(key, None)
        else:
            bounds[value] = bound
    return table, bounds


def consensus_scores(table: ScoreTable) -> dict[int, float]:
    """Sigmoid of the total information score per value."""
    totals: dict[int, float] = {}
    for (_, value), score in table.entries.items():
        totals[value] = totals.get(value, 0.0) + score
    return {value: 1.0 / (1.0 + math.exp(-total)) for value, total in totals.items()}


# ---------------------------------------------------------------------------
# cross-round state


@dataclass
class RoundRecord:
    """What reliability scoring needs to remember about one round."""

    round_index: int
    is_table: dict[tuple[str, int], float]
    consensus: dict[int, float]

    def active_sources(self) -> set[str]:
        return {i for (i, _) in self.is_table}


def update_reliability(
    records: Sequence[RoundRecord], output_sets: dict[str, set[int]]
) -> dict[str, float]:
    """Cumulative agreement-with-consensus score per source, clamped to [0, 1].

    For every round a source was active and every value in its output set,
    the source earns the consensus score when it backed the value and the
    complement when it stayed silent; the total is divided by the summed
    magnitude of its information scores (epsilon-smoothed).
    """
    reliabilities: dict[str, float] = {}
    for source, claimed_values in output_sets.items():
        numerator = 0.0
        denominator = 0.0
        for record in records:
            if source not in record.active_sources():
                continue
            for value in claimed_values:
                is_score = record.is_table.get((source, value), 0.0)
                agreement = record.consensus.get(value, 0.5)
                if is_score > 0:
                    numerator += agreement
                else:
                    numerator += 1.0 - agreement
                denominator += abs(is_score)
        reliabilities[source] = min(max(numerator / (denominator + RELIABILITY_EPS), 0.0), 1.0)
    return reliabilities


def update_distribution(
    table: ScoreTable,
    reliabilities: dict[str, float],
    upper_bounds: dict[int, float],
    p_prev: dict[int, float],
) -> dict[int, float]:
    """Reliability-weighted normalized scores, clamped then renormalized.

    A value's raw mass sums s_i x NIS over its claimants. All-zero mass
    carries the previous distribution forward. Bounds are applied in a
    single clamp pass followed by one renormalization.
    """
    raw: dict[int, float] = {}
    for (source, value), _ in table.entries.items():
        weight = reliabilities.get(source, 1.0) * table.nis.get((source, value), 0.0)
        raw[value] = raw.get(value, 0.0) + weight
    total = sum(raw.values())
    if total <= 0.0:
        return dict(p_prev)
    p = {value: mass / total for value, mass in raw.items()}
    if upper_bounds:
        clamped = {value: min(prob, upper_bounds.get(value, 1.0)) for value, prob in p.items()}
        clamped_total = sum(clamped.values())
        if clamped_total > 0.0:
            p = {value: prob / clamped_total for value, prob in clamped.items()}
    return p


def aggregate(p: dict[int, float]) -> int | None:
    """Argmax value; ties break to the larger count (casualties trend up)."""
    if not p:
        return None
    return max(p.items(), key=lambda item: (item[1], item[0]))[0]


@dataclass
class TruthPoint:
    """A discovered casualty value awaiting operator review."""

    point_id: str
    kind: str
    value: int
    earliest_timestamp: datetime
    round_index: int
    status: str = "pending"  # pending | approved | rejected
    evidence: tuple[str, ...] = ()


@dataclass
class ScoreRow:
    """One claim's full score breakdown, for the supplement-style export."""

    round_index: int
    source: str
    value: int
    kind: str
    post_id: str
    verified: bool
    xi: float
    r: float
    rho: float
    information: float
    normalized: float
    consensus: float
    reliability: float


@dataclass
class TruthState:
    """Single-writer truth-discovery state for one (event, kind) series."""

    kind: str
    round_index: int = 0
    p: dict[int, float] = dataclass_field(default_factory=dict)
    current_estimate: int | None = None
    earliest_seen: dict[int, datetime] = dataclass_field(default_factory=dict)
    evidence: dict[int, list[str]] = dataclass_field(default_factory=dict)
    records: list[RoundRecord] = dataclass_field(default_factory=list)
    output_sets: dict[str, set[int]] = dataclass_field(default_factory=dict)
    reliabilities: dict[str, float] = dataclass_field(default_factory=dict)

    def observe(self, claim: CasualtyClaim) -> None:
        seen = self.earliest_seen.get(claim.value)
        if seen is None or claim.timestamp < seen:
            self.earliest_seen[claim.value] = claim.timestamp
        ids = self.evidence.setdefault(claim.value, [])
        if claim.post_id not in ids:
            ids.append(claim.post_id)


@dataclass
class RoundOutcome:
    point: TruthPoint | None
    estimate: int | None
    distribution: dict[int, float]
    score_rows: list[ScoreRow]


def run_round(
    state: TruthState,
    claims: Sequence[ScoredClaim],
    round_index: int,
    verified_sources: dict[str, bool] | None = None,
) -> RoundOutcome:
    """Advance one round: score, constrain, fuse, and maybe emit a point.

    Rounds are strictly sequential per state. An empty (or fully
    zero-weight) batch carries the distribution forward and emits nothing.
    """
    if round_index != state.round_index + 1:
        raise InputError(
            f"round {round_index} out of sequence (state at {state.round_index})"
        )
    for scored in claims:
        if scored.claim.kind != state.kind:
            raise InputError("claim kind does not match state")
        state.observe(scored.claim)

    p_prev = dict(state.p)
    point: TruthPoint | None = None
    rows: list[ScoreRow] = []

    table = information_scores(claims) if claims else ScoreTable(round_index=round_index)
    table.round_index = round_index
    normalize_scores(table)
    table, bounds = apply_physical_constraints(table, p_prev)
    consensus = consensus_scores(table)

    if table.entries:
        state.records.append(
            RoundRecord(round_index=round_index, is_table=dict(table.entries), consensus=consensus)
        )
        for (source, value) in table.entries:
            state.output_sets.setdefault(source, set()).add(value)
        if len(state.records) == 1:
            reliabilities = {source: 1.0 for source in table.sources()}
        else:
            reliabilities = update_reliability(state.records, state.output_sets)
        state.reliabilities = reliabilities
        p = update_distribution(table, reliabilities, bounds, p_prev)
    else:
        p = dict(p_prev)

    estimate = aggregate(p)
    if estimate is not None and estimate != state.current_estimate:
        point = TruthPoint(
            point_id=f"{state.kind}-r{round_index}-v{estimate}",
            kind=state.kind,
            value=estimate,
            earliest_timestamp=state.earliest_seen[estimate],
            round_index=round_index,
            evidence=tuple(state.evidence.get(estimate, [])),
        )

    verified_sources = verified_sources or {}
    for scored in claims:
        key = (scored.claim.source_account, scored.claim.value)
        rows.append(
            ScoreRow(
                round_index=round_index,
                source=scored.claim.source_account,
                value=scored.claim.value,
                kind=scored.claim.kind,
                post_id=scored.claim.post_id,
                verified=verified_sources.get(scored.claim.post_id, False),
                xi=scored.claim.confidence,
                r=scored.relevance,
                rho=scored.independence,
                information=table.entries.get(key, 0.0),
                normalized=table.nis.get(key, 0.0),
                consensus=consensus.get(scored.claim.value, 0.5),
                reliability=state.reliabilities.get(scored.claim.source_account, 1.0),
            )
        )

    state.p = p
    state.round_index = round_index
    if estimate is not None:
        state.current_estimate = estimate
    return RoundOutcome(point=point, estimate=estimate, distribution=dict(p), score_rows=rows)
