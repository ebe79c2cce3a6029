from __future__ import annotations

import math
import random
from datetime import timedelta

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quaketruth.errors import InputError
from quaketruth.truth import (
    RoundRecord,
    ScoreTable,
    TruthState,
    aggregate,
    apply_physical_constraints,
    consensus_scores,
    independence_score,
    information_scores,
    jaccard,
    normalize_scores,
    relevance_score,
    run_round,
    text_shingles,
    update_distribution,
    update_reliability,
)

from .conftest import LUDING_ORIGIN, make_scored
from .oracle import reference_run


def run_engine(round_batches):
    """Drive the production engine with oracle-style claim dicts."""
    state = TruthState(kind="deaths")
    outcomes = []
    for index, batch in enumerate(round_batches, start=1):
        claims = [
            make_scored(c["source"], c["value"], index, xi=c["xi"], r=c["r"],
                        rho=c["rho"], hours=index, post_id=f"p{index}-{i}")
            for i, c in enumerate(batch)
        ]
        outcomes.append(run_round(state, claims, index))
    return state, outcomes


class TestIndependence:
    def test_forward_scores_zero(self):
        assert independence_score(True, "anything", ["other"]) == 0.0

    def test_first_post_scores_one(self):
        assert independence_score(False, "first words", []) == 1.0

    def test_exact_duplicate_scores_zero(self):
        assert independence_score(False, "Same  Text", ["same text"]) == 0.0

    def test_partial_overlap_matches_brute_force(self):
        text = "29 dead in Les Cayes tonight"
        earlier = "29 dead in Les Cayes at dawn"
        expected = 1.0 - jaccard(text_shingles(text), text_shingles(earlier))
        assert independence_score(False, text, [earlier]) == pytest.approx(expected)
        # brute-force shingle comparison, recomputed by hand here
        a = {text.casefold()[i:i + 3] for i in range(len(text) - 2)}
        b = {earlier.casefold()[i:i + 3] for i in range(len(earlier) - 2)}
        assert expected == pytest.approx(1.0 - len(a & b) / len(a | b))


class TestRelevance:
    def test_upper_clamp(self):
        assert relevance_score(1.0, 1.0, 1.0) == 1.0 - 1e-6

    def test_product(self):
        assert relevance_score(0.9, 0.8, 0.9) == pytest.approx(0.648)

    def test_lower_clamp(self):
        assert relevance_score(0.9, 0.0, 0.9) == 1e-6

    def test_out_of_range_rejected(self):
        with pytest.raises(InputError):
            relevance_score(1.2, 0.5, 0.5)


class TestInformationScores:
    def test_single_product(self):
        table = information_scores([make_scored("a", 7, 1, xi=0.8, r=0.5, rho=1.0)])
        assert table.entries[("a", 7)] == pytest.approx(0.4)

    def test_same_source_same_value_sums(self):
        claims = [
            make_scored("a", 7, 1, xi=0.8, r=0.5, rho=1.0, post_id="p1"),
            make_scored("a", 7, 1, xi=0.5, r=0.4, rho=1.0, post_id="p2"),
        ]
        table = information_scores(claims)
        assert table.entries[("a", 7)] == pytest.approx(0.4 + 0.2)

    def test_zero_weight_claim_leaves_no_entry(self):
        table = information_scores([make_scored("a", 7, 1, rho=0.0)])
        assert table.entries == {}

    def test_three_by_two_fixture_matches_oracle(self):
        rng = random.Random(42)
        batch = [
            {"source": f"s{i}", "value": v, "xi": rng.uniform(0.1, 0.9),
             "r": rng.uniform(0.1, 0.9), "rho": rng.uniform(0.1, 1.0)}
            for i in range(3) for v in (10, 20)
        ]
        table = information_scores([
            make_scored(c["source"], c["value"], 1, xi=c["xi"], r=c["r"], rho=c["rho"],
                        post_id=f"p{i}")
            for i, c in enumerate(batch)
        ])
        reference = reference_run([batch])[0]
        assert set(table.entries) == set(reference.table)
        for key, value in reference.table.items():
            assert table.entries[key] == pytest.approx(value, abs=1e-12)


class TestNormalizeScores:
    def test_max_entry_is_one(self):
        table = information_scores([
            make_scored("a", 7, 1, xi=0.8, r=0.5, rho=1.0, post_id="p1"),
            make_scored("b", 9, 1, xi=0.4, r=0.5, rho=1.0, post_id="p2"),
        ])
        normalize_scores(table)
        assert table.nis[("a", 7)] == pytest.approx(1.0)
        assert table.nis[("b", 9)] == pytest.approx(0.5)

    def test_single_entry_is_one(self):
        table = normalize_scores(information_scores([make_scored("a", 7, 1)]))
        assert table.nis[("a", 7)] == pytest.approx(1.0)

    def test_empty_table_stays_empty(self):
        table = normalize_scores(ScoreTable(round_index=1))
        assert table.nis == {}


class TestPhysicalConstraints:
    def test_zero_prefix_value_removed(self):
        table = normalize_scores(information_scores([make_scored("a", 0, 2)]))
        pruned, bounds = apply_physical_constraints(table, {21: 0.4, 30: 0.6})
        assert pruned.entries == {} and bounds == {}

    def test_first_round_unconstrained(self):
        table = normalize_scores(information_scores([make_scored("a", 7, 1)]))
        pruned, bounds = apply_physical_constraints(table, {})
        assert pruned.entries and bounds == {}

    def test_prefix_maximum_bounds(self):
        claims = [make_scored("a", 7, 2, post_id="p1"),
                  make_scored("b", 21, 2, post_id="p2"),
                  make_scored("c", 46, 2, post_id="p3")]
        table = normalize_scores(information_scores(claims))
        pruned, bounds = apply_physical_constraints(table, {21: 0.4, 30: 0.6})
        assert ("a", 7) not in pruned.entries
        assert bounds == {21: pytest.approx(0.4), 46: pytest.approx(0.6)}


class TestConsensus:
    def test_sigmoid_at_zero(self):
        assert consensus_scores(ScoreTable(round_index=1)) == {}
        # a zero total would sit exactly at 0.5
        assert 1.0 / (1.0 + math.exp(0.0)) == 0.5

    def test_unit_total(self):
        table = ScoreTable(round_index=1, entries={("a", 7): 1.0})
        assert consensus_scores(table)[7] == pytest.approx(0.7311, abs=1e-4)

    def test_saturates(self):
        table = ScoreTable(round_index=1, entries={("a", 7): 50.0})
        assert consensus_scores(table)[7] == pytest.approx(1.0, abs=1e-9)


class TestReliability:
    def test_single_pair_clamps_to_one(self):
        record = RoundRecord(1, {("a", 7): 0.4}, {7: 1 / (1 + math.exp(-0.4))})
        assert update_reliability([record], {"a": {7}})["a"] == 1.0

    def test_single_pair_unclamped_value(self):
        d = 1 / (1 + math.exp(-3.0))
        record = RoundRecord(1, {("a", 7): 3.0}, {7: d})
        expected = d / (3.0 + 1e-6)
        assert update_reliability([record], {"a": {7}})["a"] == pytest.approx(expected)

    def test_perfect_agreement_is_one(self):
        records = [
            RoundRecord(t, {("a", 7): 1.0}, {7: 1.0}) for t in (1, 2)
        ]
        assert update_reliability(records, {"a": {7}})["a"] == pytest.approx(1.0, abs=1e-6)

    def test_silence_on_contested_value_counts_complement(self):
        # source b never claims 9; D for 9 is high, so b earns 1 - D there
        records = [
            RoundRecord(1, {("a", 9): 2.0, ("b", 7): 0.5},
                        {9: 1 / (1 + math.exp(-2.0)), 7: 1 / (1 + math.exp(-0.5))}),
            RoundRecord(2, {("b", 9): 0.5}, {9: 1 / (1 + math.exp(-0.5))}),
        ]
        outputs = {"a": {9}, "b": {7, 9}}
        result = update_reliability(records, outputs)
        d9_r1 = 1 / (1 + math.exp(-2.0))
        d7_r1 = 1 / (1 + math.exp(-0.5))
        d9_r2 = 1 / (1 + math.exp(-0.5))
        expected_b = (d7_r1 + (1 - d9_r1) + 0.5 + d9_r2) / (0.5 + 0.5 + 1e-6)
        assert result["b"] == pytest.approx(min(expected_b, 1.0))


class TestUpdateDistribution:
    def _table(self, raw):
        entries = {(f"s{i}", k): v for i, (k, v) in enumerate(raw.items())}
        table = ScoreTable(round_index=1, entries=entries)
        table.nis = dict(entries)
        return table

    def test_single_support(self):
        table = self._table({7: 0.4})
        p = update_distribution(table, {"s0": 1.0}, {}, {})
        assert p == {7: pytest.approx(1.0)}

    def test_normalization(self):
        table = self._table({7: 0.6, 9: 0.2})
        p = update_distribution(table, {"s0": 1.0, "s1": 1.0}, {}, {})
        assert p[7] == pytest.approx(0.75) and p[9] == pytest.approx(0.25)

    def test_clamp_then_renormalize(self):
        table = self._table({7: 0.5, 9: 0.5})
        p = update_distribution(table, {"s0": 1.0, "s1": 1.0}, {7: 0.2}, {7: 0.2, 9: 0.8})
        assert p[7] == pytest.approx(0.2857, abs=1e-4)
        assert p[9] == pytest.approx(0.7143, abs=1e-4)

    def test_all_zero_raw_carries_previous(self):
        p = update_distribution(ScoreTable(round_index=2), {}, {}, {7: 1.0})
        assert p == {7: 1.0}


class TestAggregate:
    def test_argmax(self):
        assert aggregate({21: 0.7, 30: 0.3}) == 21

    def test_tie_breaks_to_larger(self):
        assert aggregate({21: 0.5, 30: 0.5}) == 30

    def test_empty_is_none(self):
        assert aggregate({}) is None


class TestRunRound:
    def test_empty_batch_carries_state(self):
        state = TruthState(kind="deaths")
        run_round(state, [make_scored("a", 7, 1)], 1)
        outcome = run_round(state, [], 2)
        assert outcome.point is None
        assert state.p == {7: pytest.approx(1.0)}
        assert state.round_index == 2

    def test_out_of_sequence_round_rejected(self):
        state = TruthState(kind="deaths")
        with pytest.raises(InputError):
            run_round(state, [], 5)

    def test_emits_on_estimate_change_with_earliest_timestamp(self):
        state = TruthState(kind="deaths")
        first = run_round(state, [make_scored("a", 7, 1, hours=3.0)], 1)
        assert first.point is not None and first.point.value == 7
        assert first.point.earliest_timestamp == LUDING_ORIGIN + timedelta(hours=3)
        second = run_round(
            state,
            [make_scored("b", 21, 2, hours=4.1, post_id="x1"),
             make_scored("c", 21, 2, hours=4.2, post_id="x2")],
            2,
        )
        assert second.point is not None and second.point.value == 21
        assert second.point.earliest_timestamp == LUDING_ORIGIN + timedelta(hours=4.1)
        assert set(second.point.evidence) == {"x1", "x2"}

    def test_unchanged_estimate_emits_nothing(self):
        state = TruthState(kind="deaths")
        run_round(state, [make_scored("a", 7, 1)], 1)
        outcome = run_round(state, [make_scored("b", 7, 2, post_id="q")], 2)
        assert outcome.point is None

    def test_misinformation_forwards_suppressed(self):
        batch = [{"source": "orig", "value": 16, "xi": 0.6, "r": 0.5, "rho": 1.0}]
        batch += [
            {"source": f"fwd{i}", "value": 16, "xi": 0.6, "r": 0.5, "rho": 0.0}
            for i in range(12)
        ]
        batch += [
            {"source": "wit1", "value": 3, "xi": 0.6, "r": 0.5, "rho": 1.0},
            {"source": "wit2", "value": 3, "xi": 0.6, "r": 0.5, "rho": 1.0},
        ]
        _, outcomes = run_engine([batch])
        assert outcomes[0].estimate == 3

    def test_earliest_seen_never_increases(self):
        state = TruthState(kind="deaths")
        run_round(state, [make_scored("a", 7, 1, hours=5.0)], 1)
        run_round(state, [make_scored("b", 7, 2, hours=3.0, post_id="earlier")], 2)
        assert state.earliest_seen[7] == LUDING_ORIGIN + timedelta(hours=3)


class TestEngineMatchesOracle:
    @pytest.mark.parametrize("seed", [1, 7, 23, 99])
    def test_random_instances(self, seed):
        rng = random.Random(seed)
        rounds = [batch for batch in
                  [[dict(c) for c in batch] for batch in self._instance(rng)]]
        state, outcomes = run_engine(rounds)
        reference = reference_run(rounds)
        for outcome, ref in zip(outcomes, reference):
            assert set(outcome.distribution) == set(ref.p)
            for value, prob in ref.p.items():
                assert outcome.distribution[value] == pytest.approx(prob, abs=1e-9)

    @staticmethod
    def _instance(rng):
        from .oracle import random_instance

        return random_instance(rng)


@st.composite
def _claim_batches(draw):
    n_rounds = draw(st.integers(min_value=1, max_value=4))
    values = draw(st.lists(st.integers(min_value=0, max_value=80),
                           min_size=1, max_size=3, unique=True))
    rounds = []
    for _ in range(n_rounds):
        size = draw(st.integers(min_value=0, max_value=4))
        batch = []
        for i in range(size):
            batch.append({
                "source": f"s{draw(st.integers(min_value=0, max_value=3))}",
                "value": draw(st.sampled_from(values)),
                "xi": draw(st.floats(min_value=0.05, max_value=0.95)),
                "r": draw(st.floats(min_value=0.05, max_value=0.95)),
                "rho": draw(st.sampled_from([0.0, 0.3, 0.7, 1.0])),
            })
        rounds.append(batch)
    return rounds


class TestInvariants:
    @settings(max_examples=60, deadline=None)
    @given(_claim_batches())
    def test_distribution_sums_to_one(self, rounds):
        _, outcomes = run_engine(rounds)
        for outcome in outcomes:
            if outcome.distribution:
                assert sum(outcome.distribution.values()) == pytest.approx(1.0, abs=1e-9)
            for prob in outcome.distribution.values():
                assert prob >= 0.0

    @settings(max_examples=60, deadline=None)
    @given(_claim_batches())
    def test_score_ranges(self, rounds):
        _, outcomes = run_engine(rounds)
        for outcome in outcomes:
            for row in outcome.score_rows:
                assert row.information >= 0.0
                assert 0.0 <= row.normalized <= 1.0
                assert 0.0 <= row.reliability <= 1.0
                assert 0.0 < row.consensus < 1.0

    @settings(max_examples=40, deadline=None)
    @given(_claim_batches(), st.floats(min_value=0.1, max_value=1.0))
    def test_confidence_scaling_invariance(self, rounds, scale):
        _, base = run_engine(rounds)
        scaled_rounds = [
            [dict(c, xi=max(c["xi"] * scale, 1e-6)) for c in batch] for batch in rounds
        ]
        _, scaled = run_engine(scaled_rounds)
        for a, b in zip(base, scaled):
            assert set(a.distribution) == set(b.distribution)
            for value in a.distribution:
                assert a.distribution[value] == pytest.approx(b.distribution[value], abs=1e-9)
            assert a.estimate == b.estimate

    @settings(max_examples=40, deadline=None)
    @given(_claim_batches())
    def test_zero_rho_removes_exactly_that_contribution(self, rounds):
        if not rounds or not rounds[0]:
            return
        target = rounds[0][0]
        with_zero = [[dict(c) for c in batch] for batch in rounds]
        with_zero[0][0]["rho"] = 0.0
        without = [[dict(c) for c in batch] for batch in rounds]
        without[0] = without[0][1:]
        _, a = run_engine(with_zero)
        _, b = run_engine(without)
        for oa, ob in zip(a, b):
            assert set(oa.distribution) == set(ob.distribution)
            for value in oa.distribution:
                assert oa.distribution[value] == pytest.approx(ob.distribution[value], abs=1e-12)
