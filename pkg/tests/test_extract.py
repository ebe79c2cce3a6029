from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quaketruth.errors import InputError
from quaketruth.extract import (
    CompletionClient,
    ExtractionAnswer,
    Gazetteer,
    KeyParseError,
    Lexicon,
    PromptTemplate,
    Shot,
    build_prompt,
    default_template,
    extract_llm,
    extract_llm_batch,
    extract_rules,
    parse_count,
    parse_key,
    render_key,
    validate_claim,
)
from quaketruth.mock import canned_completion, create_completion_app, load_canned_completions
from quaketruth.resources import fixture_path
from quaketruth.transport import SyncASGITransport

from .conftest import make_post

HAITI_TWEET = (
    "8/21 Haiti was hit by an earthquake leaving 2,200 dead, 10K homeless. "
    "1 week later a Hurricane, killing 14, caused 500mil in damage."
)


@pytest.fixture(scope="module")
def lexicon():
    return Lexicon.from_csv(fixture_path("lexicon.csv"))


@pytest.fixture(scope="module")
def gazetteer():
    return Gazetteer.from_csv(fixture_path("gazetteer.csv"))


class TestParseCount:
    @pytest.mark.parametrize(
        "token,expected",
        [
            ("2,200", 2200),
            ("4k", 4000),
            ("10K", 10000),
            ("0", 0),
            ("600", 600),
            ("1.5k", 1500),
            ("2m", 2_000_000),
            ("three", 3),
            ("trois", 3),
            ("tres", 3),
            ("三", 3),
        ],
    )
    def test_convertible(self, token, expected):
        assert parse_count(token) == expected

    @pytest.mark.parametrize("token", ["lots", "", "6.8", "-5", "2,20", "500mil", "k"])
    def test_unconvertible(self, token):
        assert parse_count(token) is None

    @given(st.integers(min_value=0, max_value=10**9))
    def test_roundtrip_on_canonical_digits(self, n):
        assert parse_count(str(n)) == n


class TestPromptTemplate:
    def test_zero_shots_rejected(self):
        with pytest.raises(InputError):
            PromptTemplate(shots=())

    def test_shot_with_wrong_segment_count_rejected(self):
        with pytest.raises(InputError):
            PromptTemplate(shots=(Shot("text", "q", "600|4000"),))

    def test_must_cover_missing_field_case(self):
        shot = Shot("t", "q", "1|2|a|b|c|2021|Yes")
        with pytest.raises(InputError):
            PromptTemplate(shots=(shot,))


class TestBuildPrompt:
    def test_ends_with_event_query(self, haiti_event):
        post = make_post("p", "some text", origin=haiti_event.origin_time)
        prompt = build_prompt(default_template(), post, haiti_event)
        lines = prompt.splitlines()
        assert lines[-1] == "[Key]:"
        assert lines[-2].endswith("Haiti Earthquake?")
        assert "[Tweet]: some text" in prompt

    def test_byte_stable(self, haiti_event):
        post = make_post("p", "identical", origin=haiti_event.origin_time)
        template = default_template()
        assert build_prompt(template, post, haiti_event) == build_prompt(template, post, haiti_event)


class TestParseKey:
    def test_nice_exemplar(self):
        answer = parse_key("600|4000|Nice|Nice|France|2021|No", default_template())
        assert answer.deaths == 600
        assert answer.injuries == 4000
        assert answer.city == "Nice"
        assert answer.country == "France"
        assert answer.year == 2021
        assert answer.event_match is False

    def test_missing_marker_yields_absent_field(self):
        answer = parse_key("29|∅|Les Cayes|Les Cayes|Haiti|2021|Yes", default_template())
        assert answer.deaths == 29
        assert answer.injuries is None
        assert answer.event_match is True

    def test_wrong_segment_count_is_parse_error(self):
        with pytest.raises(KeyParseError):
            parse_key("600|4000", default_template())

    def test_unconvertible_count_becomes_absent(self):
        answer = parse_key("several|4000|x|x|France|2021|No", default_template())
        assert answer.deaths is None and answer.injuries == 4000

    def test_unreadable_event_match_is_parse_error(self):
        with pytest.raises(KeyParseError):
            parse_key("1|2|a|b|c|2021|maybe", default_template())


_segment_text = st.text(
    alphabet=st.characters(blacklist_characters="|∅\n", blacklist_categories=("Cs", "Cc")),
    min_size=1,
    max_size=12,
).map(str.strip).filter(bool)

_answers = st.builds(
    ExtractionAnswer,
    deaths=st.one_of(st.none(), st.integers(min_value=0, max_value=10**6)),
    injuries=st.one_of(st.none(), st.integers(min_value=0, max_value=10**6)),
    city=st.one_of(st.none(), _segment_text),
    country=st.one_of(st.none(), _segment_text),
    year=st.one_of(st.none(), st.integers(min_value=1900, max_value=2100)),
    event_match=st.booleans(),
)


class TestRenderRoundTrip:
    @settings(max_examples=200)
    @given(_answers)
    def test_parse_inverts_render(self, answer):
        template = default_template()
        parsed = parse_key(render_key(answer, template), template)
        assert parsed.values_equal(answer)


def _client_for(canned, **kwargs):
    app = create_completion_app(canned)
    return CompletionClient(
        "http://llm.mock", transport=SyncASGITransport(app), **kwargs
    )


class TestExtractLlm:
    def test_mock_passthrough(self, haiti_event):
        canned = load_canned_completions(fixture_path("completions.json"))
        client = _client_for(canned)
        post = make_post(
            "p",
            "BREAKING: Earthquake of 5.9 magnitude in Nice this morning, killing 600 and 4k injured. #France#NICE",
            origin=haiti_event.origin_time,
        )
        answer = extract_llm(client, default_template(), post, haiti_event)
        assert answer is not None
        assert answer.deaths == 600 and answer.injuries == 4000
        assert answer.event_match is False
        assert all(0.5 <= c <= 1.0 for c in answer.field_confidences.values())

    def test_low_confidence_field_discards_answer(self, haiti_event):
        key = "600|4000|Nice|Nice|France|2021|No"
        body = canned_completion(key, prob=[0.3, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9])
        client = _client_for({"weak": body})
        post = make_post("p", "weak", origin=haiti_event.origin_time)
        assert extract_llm(client, default_template(), post, haiti_event) is None

    def test_backend_city_string_is_stored_verbatim(self, haiti_event):
        canned = load_canned_completions(fixture_path("completions.json"))
        client = _client_for(canned)
        post = make_post("p", "A lot of damage in Okay. So far 29 reported deaths.",
                         origin=haiti_event.origin_time)
        answer = extract_llm(client, default_template(), post, haiti_event)
        assert answer is not None and answer.city == "Les Cayes"

    def test_unparseable_completion_is_absent(self, haiti_event):
        client = _client_for({"junk": {"text": "no key here", "token_probs": []}})
        post = make_post("p", "junk", origin=haiti_event.origin_time)
        assert extract_llm(client, default_template(), post, haiti_event) is None

    def test_batch_preserves_order(self, haiti_event):
        canned = load_canned_completions(fixture_path("completions.json"))
        client = _client_for(canned, max_inflight=2)
        posts = [
            make_post("a", "A lot of damage in Okay. So far 29 reported deaths.",
                      origin=haiti_event.origin_time),
            make_post("b", "unknown text", origin=haiti_event.origin_time),
            make_post("c", HAITI_TWEET, origin=haiti_event.origin_time),
        ]
        answers = extract_llm_batch(client, default_template(), posts, haiti_event)
        assert answers[0].deaths == 29
        assert answers[1] is None
        assert answers[2].deaths == 2200


class TestExtractRules:
    def test_nearest_lexeme_beats_later_distraction(self, haiti_event, lexicon, gazetteer):
        post = make_post("p", HAITI_TWEET, origin=haiti_event.origin_time)
        answer = extract_rules(post, haiti_event, lexicon, gazetteer)
        assert answer is not None and answer.deaths == 2200
        assert answer.year == 2021 and answer.event_match is True

    def test_simple_deaths_report(self, haiti_event, lexicon, gazetteer):
        post = make_post("p", "So far 29 reported deaths", origin=haiti_event.origin_time)
        answer = extract_rules(post, haiti_event, lexicon, gazetteer)
        assert answer is not None and answer.deaths == 29 and answer.injuries is None

    def test_no_count_token_yields_nothing(self, haiti_event, lexicon, gazetteer):
        post = make_post("p", "No casualties reported", origin=haiti_event.origin_time)
        assert extract_rules(post, haiti_event, lexicon, gazetteer) is None

    def test_total_and_deterministic(self, haiti_event, lexicon, gazetteer):
        post = make_post("p", "!!! ;;; 🌍 مرحبا 123", origin=haiti_event.origin_time)
        first = extract_rules(post, haiti_event, lexicon, gazetteer)
        second = extract_rules(post, haiti_event, lexicon, gazetteer)
        assert first == second

    def test_chinese_counts(self, luding_event, lexicon, gazetteer):
        post = make_post("p", "泸定地震已致46人死亡", language="zh")
        answer = extract_rules(post, luding_event, lexicon, gazetteer)
        assert answer is not None and answer.deaths == 46
        assert answer.city == "Luding" and answer.country == "China"

    def test_gazetteer_alias_lookup(self, haiti_event, lexicon, gazetteer):
        post = make_post("p", "A lot of damage in Okay. So far 29 reported deaths.",
                         origin=haiti_event.origin_time)
        answer = extract_rules(post, haiti_event, lexicon, gazetteer)
        assert answer is not None
        assert answer.city == "Les Cayes" and answer.country == "Haiti"

    def test_injuries_detected(self, luding_event, lexicon, gazetteer):
        post = make_post("p", "Hospitals in Luding county report 50 injured tonight")
        answer = extract_rules(post, luding_event, lexicon, gazetteer)
        assert answer is not None and answer.injuries == 50 and answer.deaths is None


class TestValidateClaim:
    def test_event_mismatch_dropped(self, haiti_event):
        answer = parse_key("600|4000|Nice|Nice|France|2021|No", default_template())
        post = make_post("p", "nice tweet", origin=haiti_event.origin_time)
        assert validate_claim(answer, haiti_event, post) == []

    def test_wrong_year_dropped(self, haiti_event):
        answer = ExtractionAnswer(deaths=300, year=2010, country="Haiti", event_match=True)
        post = make_post("p", "old quake recall", origin=haiti_event.origin_time)
        assert validate_claim(answer, haiti_event, post) == []

    def test_wrong_country_dropped(self, haiti_event):
        answer = ExtractionAnswer(deaths=10, year=2021, country="France", event_match=True)
        post = make_post("p", "text", origin=haiti_event.origin_time)
        assert validate_claim(answer, haiti_event, post) == []

    def test_matching_answer_passes_through(self, haiti_event):
        answer = ExtractionAnswer(
            deaths=29, year=2021, country="Haiti", event_match=True,
            field_confidences={"deaths": 0.9},
        )
        post = make_post("p", "text", origin=haiti_event.origin_time)
        claims = validate_claim(answer, haiti_event, post)
        assert len(claims) == 1
        claim = claims[0]
        assert claim.kind == "deaths" and claim.value == 29
        assert claim.confidence == pytest.approx(0.9)

    def test_both_kinds_emitted(self, haiti_event):
        answer = ExtractionAnswer(deaths=600, injuries=4000, event_match=True,
                                  field_confidences={"deaths": 0.8, "injuries": 0.7})
        post = make_post("p", "text", origin=haiti_event.origin_time)
        claims = validate_claim(answer, haiti_event, post)
        assert {c.kind for c in claims} == {"deaths", "injuries"}

    def test_unknown_place_passes_through(self, haiti_event):
        answer = ExtractionAnswer(deaths=5, city="Unknownville", event_match=True)
        post = make_post("p", "text", origin=haiti_event.origin_time)
        claims = validate_claim(answer, haiti_event, post)
        assert claims and claims[0].place == ("Unknownville", None)
