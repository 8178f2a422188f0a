"""Layer 2b: feature extraction with full source-span provenance.

Two deterministic mechanisms populate a FeatureSet from a case narrative:

* structured extraction: regex rules for ages, counts, platforms, evidence
  volume, prosecution outcomes, investigation types and agencies;
* semantic extraction: keyword tables for severity indicators and case
  topics, matched as case-insensitive substrings (keywords containing a
  character class, e.g. "age [5-9]", are applied as regexes).

Every populated feature is backed by at least one HighlightSpan recording
the exact source offsets and the id of the rule that fired. Extraction is a
pure function of (text, rule config): no state, no learning, no randomness.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from datetime import datetime, timezone

from .batcher import CaseSegment
from .config import Config, load_config
from .errors import FeatureValidationError, UnknownCategory
from .records import CaseRecord, EvidenceStorage, FeatureSet, HighlightSpan

logger = logging.getLogger(__name__)

AGE_MIN, AGE_MAX = 0, 120


@dataclass(frozen=True)
class StructuredRule:
    rule_id: str
    pattern: re.Pattern[str]
    tag: str | None = None
    value: str | None = None


@dataclass(frozen=True)
class KeywordRule:
    rule_id: str
    keyword: str
    pattern: re.Pattern[str]


@dataclass(frozen=True)
class ValidationIssue:
    severity: str  # "warning" or "error"
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.field}: {self.message}"


def _slug(keyword: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", keyword.lower()).strip("_")


def _keyword_pattern(keyword: str) -> re.Pattern[str]:
    # Bracketed keywords are character-class patterns; everything else is a
    # literal substring.
    if "[" in keyword:
        return re.compile(keyword, re.IGNORECASE)
    return re.compile(re.escape(keyword), re.IGNORECASE)


class RuleBook:
    """Compiled pattern config: structured rules, keyword tables, vocabularies."""

    def __init__(self, config: Config):
        self.config = config
        self.structured: dict[str, list[StructuredRule]] = {}
        for field_name, rules in config.structured_patterns.items():
            self.structured[field_name] = [
                StructuredRule(
                    rule_id=r["id"],
                    pattern=re.compile(r["regex"], re.IGNORECASE),
                    tag=r.get("tag"),
                    value=r.get("value"),
                )
                for r in rules
            ]
        self.semantic: dict[str, dict[str, list[KeywordRule]]] = {}
        for category, table in config.semantic_patterns.items():
            self.semantic[category] = {
                feature: [
                    KeywordRule(
                        rule_id=f"{category}.{feature}.{_slug(kw)}",
                        keyword=kw,
                        pattern=_keyword_pattern(kw),
                    )
                    for kw in keywords
                ]
                for feature, keywords in table.items()
            }
        self.phrases: dict[str, KeywordRule] = {
            tag: KeywordRule(
                rule_id=f"severity_phrases.{tag}",
                keyword=phrase,
                pattern=re.compile(r"\b" + re.escape(phrase) + r"\b", re.IGNORECASE),
            )
            for tag, phrase in config.severity_phrases.items()
        }
        self.family_keywords = [
            kw for kw in config.semantic_patterns.get("case_topics", {}).get("family", [])
        ]
        self.vocabularies: dict[str, frozenset[str]] = {
            "platforms": self._tags("platforms"),
            "investigation_types": self._tags("investigation_type"),
            "prosecution": self._tags("prosecution"),
            "agencies": self._tags("agencies"),
            "severity_indicators": frozenset(self.semantic.get("severity_indicators", {})),
            "case_topics": frozenset(self.semantic.get("case_topics", {})),
            "severity_phrases": frozenset(self.phrases),
            "relationships": frozenset({"stranger", *self.family_keywords}),
            "victim_gender": frozenset(
                r.value for r in self.structured.get("victim_gender", []) if r.value
            ),
            "rso": frozenset({"true", "false"}),
        }

    def _tags(self, field_name: str) -> frozenset[str]:
        return frozenset(r.tag for r in self.structured.get(field_name, []) if r.tag)


_default_rulebook: RuleBook | None = None


def default_rulebook() -> RuleBook:
    global _default_rulebook
    if _default_rulebook is None:
        _default_rulebook = RuleBook(load_config())
    return _default_rulebook


def _span(m: re.Match[str], feature_path: str, rule_id: str) -> HighlightSpan:
    return HighlightSpan(
        case_id="",
        feature_path=feature_path,
        start=m.start(),
        end=m.end(),
        matched_text=m.group(0),
        rule_id=rule_id,
    )


def _ordered_matches(
    rules: list[StructuredRule], text: str
) -> list[tuple[re.Match[str], StructuredRule]]:
    """All matches across a field's rules, in reading order (rule order breaks ties)."""
    hits = []
    for idx, rule in enumerate(rules):
        for m in rule.pattern.finditer(text):
            hits.append((m.start(), idx, m, rule))
    hits.sort(key=lambda h: (h[0], h[1]))
    return [(m, rule) for _, _, m, rule in hits]


def _parse_int(token: str) -> int:
    return int(token.replace(",", ""))


def extract_structured(
    text: str, rules: RuleBook | None = None
) -> tuple[FeatureSet, list[HighlightSpan]]:
    """Apply the structured regex rules; returns a partial FeatureSet and spans.

    Integer fields take the first match in reading order; additional matches
    are still recorded as spans and logged when they disagree.
    """
    rb = rules or default_rulebook()
    fs = FeatureSet()
    spans: list[HighlightSpan] = []

    def first_int(field_name: str) -> int | None:
        hits = _ordered_matches(rb.structured.get(field_name, []), text)
        for m, rule in hits:
            spans.append(_span(m, field_name, rule.rule_id))
        if not hits:
            return None
        values = [_parse_int(m.group(1)) for m, _ in hits]
        if len(set(values)) > 1:
            logger.warning("%s: conflicting matches %s; keeping first", field_name, values)
        return values[0]

    def tag_hits(field_name: str, path_prefix: str) -> set[str]:
        found: set[str] = set()
        for rule in rb.structured.get(field_name, []):
            m = rule.pattern.search(text)
            if m and rule.tag:
                found.add(rule.tag)
                spans.append(_span(m, f"{path_prefix}.{rule.tag}", rule.rule_id))
        return found

    fs.perpetrator_age = first_int("perpetrator_age")
    fs.victim_count = first_int("victim_count")
    fs.evidence_images = first_int("evidence_images")
    fs.evidence_videos = first_int("evidence_videos")
    fs.evidence_messages = first_int("evidence_messages")

    for m, rule in _ordered_matches(rb.structured.get("victim_ages", []), text):
        fs.victim_ages.add(_parse_int(m.group(1)))
        spans.append(_span(m, "victim_ages", rule.rule_id))

    gender_hits = _ordered_matches(rb.structured.get("victim_gender", []), text)
    seen_rules: set[str] = set()
    for m, rule in gender_hits:
        if rule.rule_id in seen_rules:
            continue
        seen_rules.add(rule.rule_id)
        spans.append(_span(m, "victim_gender", rule.rule_id))
    if gender_hits:
        fs.victim_gender = gender_hits[0][1].value

    storage_hits = _ordered_matches(rb.structured.get("evidence_storage", []), text)
    for m, rule in storage_hits:
        spans.append(_span(m, "evidence_storage", rule.rule_id))
    if storage_hits:
        m = storage_hits[0][0]
        fs.evidence_storage = EvidenceStorage(
            magnitude=float(m.group(1).replace(",", "")), unit=m.group(2).upper()
        )

    fs.platforms = tag_hits("platforms", "platforms")
    fs.prosecution = tag_hits("prosecution", "prosecution")
    fs.agencies = tag_hits("agencies", "agencies")
    investigation = tag_hits("investigation_type", "investigation_type")
    fs.investigation_type = investigation or None

    for rule in rb.structured.get("registered_sex_offender", []):
        m = rule.pattern.search(text)
        if m:
            fs.registered_sex_offender = True
            spans.append(_span(m, "registered_sex_offender", rule.rule_id))

    for m, rule in _ordered_matches(rb.structured.get("charges", []), text):
        fs.charges.append(m.group(1).strip())
        spans.append(_span(m, "charges", rule.rule_id))

    jail_hits = _ordered_matches(rb.structured.get("jail_info", []), text)
    seen_rules = set()
    for m, rule in jail_hits:
        if rule.rule_id in seen_rules:
            continue
        seen_rules.add(rule.rule_id)
        spans.append(_span(m, "jail_info", rule.rule_id))
    if jail_hits:
        fs.jail_info = jail_hits[0][0].group(1).strip()

    return fs, spans


def extract_semantic(
    text: str, category: str, rules: RuleBook | None = None
) -> tuple[set[str], list[HighlightSpan]]:
    """Keyword-table tagging for one semantic category.

    A feature is added on its first keyword hit, with one span for that hit;
    remaining keywords for the feature are not scanned.
    """
    rb = rules or default_rulebook()
    if category not in rb.semantic:
        raise UnknownCategory(f"no keyword table for category {category!r}")
    features: set[str] = set()
    spans: list[HighlightSpan] = []
    for feature, keyword_rules in rb.semantic[category].items():
        for rule in keyword_rules:
            m = rule.pattern.search(text)
            if m:
                features.add(feature)
                spans.append(_span(m, f"{category}.{feature}", rule.rule_id))
                break
    return features, spans


def extract_severity_phrases(
    text: str, rules: RuleBook | None = None
) -> tuple[set[str], list[HighlightSpan]]:
    """Whole-word scan for the severity phrase vocabulary."""
    rb = rules or default_rulebook()
    found: set[str] = set()
    spans: list[HighlightSpan] = []
    for tag, rule in rb.phrases.items():
        m = rule.pattern.search(text)
        if m:
            found.add(tag)
            spans.append(_span(m, f"severity_phrases.{tag}", rule.rule_id))
    return found, spans


def validate(features: FeatureSet, rules: RuleBook | None = None) -> list[ValidationIssue]:
    """Range, type and vocabulary checks. Never raises; error-level issues block storage."""
    rb = rules or default_rulebook()
    issues: list[ValidationIssue] = []

    def error(field_name: str, message: str) -> None:
        issues.append(ValidationIssue("error", field_name, message))

    def check_age(field_name: str, age: int | None) -> None:
        if age is not None and not (AGE_MIN <= age <= AGE_MAX):
            error(field_name, f"age {age} outside [{AGE_MIN}, {AGE_MAX}]")

    def check_count(field_name: str, count: int | None) -> None:
        if count is not None and count < 0:
            error(field_name, f"count {count} is negative")

    def check_vocab(field_name: str, values, vocab_name: str) -> None:
        unknown = set(values or ()) - rb.vocabularies[vocab_name]
        if unknown:
            error(field_name, f"values {sorted(unknown)} outside the {vocab_name} vocabulary")

    check_age("perpetrator_age", features.perpetrator_age)
    for age in features.victim_ages:
        check_age("victim_ages", age)
    check_count("victim_count", features.victim_count)
    check_count("evidence_images", features.evidence_images)
    check_count("evidence_videos", features.evidence_videos)
    check_count("evidence_messages", features.evidence_messages)
    if features.evidence_storage is not None:
        if features.evidence_storage.magnitude <= 0:
            error("evidence_storage", "storage magnitude must be positive")
        if features.evidence_storage.unit not in ("GB", "TB"):
            error("evidence_storage", f"unknown unit {features.evidence_storage.unit!r}")
    if not features.relationship_to_victim:
        error("relationship_to_victim", "must never be empty (defaults to 'stranger')")
    elif features.relationship_to_victim not in rb.vocabularies["relationships"]:
        error(
            "relationship_to_victim",
            f"{features.relationship_to_victim!r} outside the relationships vocabulary",
        )
    if features.victim_gender is not None:
        check_vocab("victim_gender", [features.victim_gender], "victim_gender")
    check_vocab("platforms", features.platforms, "platforms")
    check_vocab("investigation_type", features.investigation_type, "investigation_types")
    check_vocab("prosecution", features.prosecution, "prosecution")
    check_vocab("agencies", features.agencies, "agencies")
    check_vocab("severity_indicators", features.severity_indicators, "severity_indicators")
    check_vocab("case_topics", features.case_topics, "case_topics")
    check_vocab("severity_phrases", features.severity_phrases, "severity_phrases")
    return issues


def build_case_record(
    segment: CaseSegment,
    rules: RuleBook | None = None,
    created_at: str | None = None,
) -> CaseRecord:
    """Compose all extraction passes into a validated CaseRecord.

    The segment text is preserved verbatim as raw_text. When a family keyword
    fired, relationship_to_victim is set to the specific kin term matched;
    otherwise it keeps the "stranger" default. Error-level validation issues
    raise FeatureValidationError.
    """
    rb = rules or default_rulebook()
    features, spans = extract_structured(segment.text, rb)
    features.severity_indicators, sev_spans = extract_semantic(
        segment.text, "severity_indicators", rb
    )
    features.case_topics, topic_spans = extract_semantic(segment.text, "case_topics", rb)
    features.severity_phrases, phrase_spans = extract_severity_phrases(segment.text, rb)
    spans += sev_spans + topic_spans + phrase_spans

    if "family" in features.case_topics:
        family_span = next(s for s in spans if s.feature_path == "case_topics.family")
        kin = family_span.matched_text.lower()
        features.relationship_to_victim = kin
        spans.append(
            HighlightSpan(
                case_id="",
                feature_path=f"relationship_to_victim.{kin}",
                start=family_span.start,
                end=family_span.end,
                matched_text=family_span.matched_text,
                rule_id="relationship.family_term",
            )
        )

    issues = validate(features, rb)
    errors = [i for i in issues if i.severity == "error"]
    if errors:
        raise FeatureValidationError(segment.case_id, errors)
    for issue in issues:
        logger.warning("%s: %s", segment.case_id, issue)

    return CaseRecord(
        case_id=segment.case_id,
        source_org=segment.source_org,
        year=segment.year,
        month=segment.month,
        raw_text=segment.text,
        features=features,
        spans=[s.rebind(segment.case_id) for s in spans],
        created_at=created_at or datetime.now(timezone.utc).isoformat(),
    )
