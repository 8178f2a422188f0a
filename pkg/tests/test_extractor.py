from __future__ import annotations

import copy

import pytest

from caselens.batcher import CaseSegment
from caselens.config import Config, load_config
from caselens.errors import FeatureValidationError, UnknownCategory
from caselens.extractor import (
    RuleBook,
    build_case_record,
    extract_semantic,
    extract_severity_phrases,
    extract_structured,
    validate,
)
from caselens.records import FeatureSet

from synth import make_corpus


def _segment(text, case_id="ORG_2012_january_001"):
    return CaseSegment(
        case_id=case_id, text=text, month="January", year="2012",
        source_org="ORG", sequence_number=1,
    )


def test_structured_age_and_prosecution():
    fs, spans = extract_structured("a 34-year-old man was arrested")
    assert fs.perpetrator_age == 34
    assert "arrested" in fs.prosecution
    assert len(spans) >= 2
    paths = {s.feature_path for s in spans}
    assert {"perpetrator_age", "prosecution.arrested"} <= paths


def test_structured_evidence_volume_with_thousands_separator():
    fs, _ = extract_structured("found 1.5 TB of material and 1,200 images")
    assert fs.evidence_storage is not None
    assert (fs.evidence_storage.magnitude, fs.evidence_storage.unit) == (1.5, "TB")
    assert fs.evidence_images == 1200


def test_structured_first_numeric_match_wins_all_spans_kept():
    fs, spans = extract_structured("there were 3 victims and later 5 victims")
    assert fs.victim_count == 3
    assert len([s for s in spans if s.feature_path == "victim_count"]) == 2


def test_structured_age_does_not_steal_victim_age():
    fs, _ = extract_structured("a 12-year-old girl was contacted")
    assert fs.perpetrator_age is None
    assert fs.victim_ages == {12}
    assert fs.victim_gender == "female"


def test_structured_platforms_word_boundaries():
    fs, _ = extract_structured("groomed over Facebook and an online chat room")
    assert {"facebook", "online", "chat"} <= fs.platforms


def test_structured_rso_phrases():
    for phrase in ("a registered sex offender", "previously convicted", "a prior conviction"):
        fs, spans = extract_structured(f"the man was {phrase}.")
        assert fs.registered_sex_offender is True
        assert any(s.feature_path == "registered_sex_offender" for s in spans)


def test_structured_charges_capture():
    fs, _ = extract_structured("he was charged with sexual exploitation of a minor.")
    assert fs.charges == ["sexual exploitation of a minor"]
    assert "charged" in fs.prosecution


def test_semantic_topics_example():
    topics, spans = extract_semantic("the suspect produced and traded images online", "case_topics")
    assert {"production", "online_digital"} <= topics
    assert all(s.feature_path.startswith("case_topics.") for s in spans)


def test_semantic_empty_text():
    topics, spans = extract_semantic("", "case_topics")
    assert topics == set()
    assert spans == []


def test_semantic_unknown_category():
    with pytest.raises(UnknownCategory):
        extract_semantic("text", "not_a_category")


def test_semantic_bracket_patterns_digit_range():
    for digit in range(5, 10):
        tags, _ = extract_semantic(f"age {digit} at the time", "severity_indicators")
        assert "under_10" in tags, digit
        tags, _ = extract_semantic(f"{digit} years old at the time", "severity_indicators")
        assert "under_10" in tags, digit
    for text in ("age 4 at the time", "4 years old", "10 years old"):
        tags, _ = extract_semantic(text, "severity_indicators")
        assert "under_10" not in tags, text


def test_semantic_one_span_per_feature():
    # Both "produced" and "traded" appear; the feature fires once, on the
    # first keyword, with a single span.
    topics, spans = extract_semantic("produced and traded material", "case_topics")
    assert "production" in topics
    production_spans = [s for s in spans if s.feature_path == "case_topics.production"]
    assert len(production_spans) == 1
    assert production_spans[0].matched_text.lower() == "produced"


def test_severity_phrases_examples():
    tags, _ = extract_severity_phrases("described as dangerous and out of control")
    assert tags == {"dangerous", "out_of_control"}
    tags, _ = extract_severity_phrases("untold damage was done")
    assert tags == set()
    tags, _ = extract_severity_phrases("he stated that he would continue")
    assert tags == {"stated", "continue"}


def test_validate_accepts_plausible_age():
    assert validate(FeatureSet(perpetrator_age=34)) == []


def test_validate_rejects_out_of_range_age():
    issues = validate(FeatureSet(perpetrator_age=250))
    assert any(i.severity == "error" and i.field == "perpetrator_age" for i in issues)


def test_validate_rejects_empty_relationship():
    issues = validate(FeatureSet(relationship_to_victim=""))
    assert any(i.severity == "error" and i.field == "relationship_to_victim" for i in issues)


def test_validate_rejects_vocabulary_violation():
    issues = validate(FeatureSet(platforms={"myspace"}))
    assert any(i.severity == "error" and i.field == "platforms" for i in issues)


def test_build_case_record_default_path():
    record = build_case_record(_segment("nothing matches in here"))
    assert record.features.relationship_to_victim == "stranger"
    assert record.features.case_topics == set()
    assert record.raw_text == "nothing matches in here"


def test_build_case_record_family_sets_relationship():
    record = build_case_record(_segment("the suspect was the victim's father"))
    assert record.features.relationship_to_victim == "father"
    assert any(s.feature_path == "relationship_to_victim.father" for s in record.spans)


def test_build_case_record_propagates_validation_errors():
    # 250 is outside the valid age range; the record must be rejected.
    with pytest.raises(FeatureValidationError):
        build_case_record(_segment("the suspect, age 250, fled."))


def test_spans_verbatim_on_generated_corpus(records47):
    for record in records47:
        assert record.spans, record.case_id
        for span in record.spans:
            assert 0 <= span.start < span.end <= len(record.raw_text)
            assert record.raw_text[span.start : span.end] == span.matched_text
            assert span.case_id == record.case_id
            assert span.rule_id


def test_planted_features_recovered(corpus47, records47):
    """Extraction recall is 1.0 on the synthetic ground truth by construction."""
    assert len(records47) == len(corpus47.cases)
    for record, planted in zip(records47, corpus47.cases):
        expected = planted.expected
        got = record.features
        assert got.perpetrator_age == expected.perpetrator_age
        assert got.victim_count == expected.victim_count
        assert got.evidence_images == expected.evidence_images
        assert got.evidence_videos == expected.evidence_videos
        assert got.evidence_storage == expected.evidence_storage
        assert got.jail_info == expected.jail_info
        assert got.victim_gender == expected.victim_gender
        assert got.registered_sex_offender == expected.registered_sex_offender
        assert got.relationship_to_victim == expected.relationship_to_victim
        assert set(expected.victim_ages) <= set(got.victim_ages)
        assert expected.platforms <= got.platforms
        assert expected.case_topics <= got.case_topics
        assert expected.severity_indicators <= got.severity_indicators
        assert expected.severity_phrases <= got.severity_phrases
        assert set(expected.investigation_type or ()) <= set(got.investigation_type or ())
        assert expected.agencies <= got.agencies
        assert list(expected.charges) == got.charges
        span_paths = {s.feature_path for s in record.spans}
        missing = planted.span_paths - span_paths
        assert not missing, (record.case_id, missing)


def test_extension_keyword_is_monotone(rulebook):
    text = "the suspect used a webcam to meet the child"
    base_topics, _ = extract_semantic(text, "case_topics", rulebook)
    data = copy.deepcopy(load_config().data)
    data["semantic_patterns"]["case_topics"]["online_digital"].append("webcam")
    extended = RuleBook(Config(data))
    extended_topics, _ = extract_semantic(text, "case_topics", extended)
    assert base_topics <= extended_topics
    assert "online_digital" in extended_topics


def test_extraction_is_deterministic(rulebook):
    corpus = make_corpus(5, seed=12)
    from caselens.batcher import batch_cases

    segments = batch_cases(corpus.document, corpus.org, corpus.year)
    first = [build_case_record(s, rulebook, created_at="t") for s in segments]
    second = [build_case_record(s, rulebook, created_at="t") for s in segments]
    for a, b in zip(first, second):
        assert a.features.to_json() == b.features.to_json()
        assert a.spans_json() == b.spans_json()
