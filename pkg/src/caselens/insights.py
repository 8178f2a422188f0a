"""Layer 4c: aggregate insights and tag-based filtering.

Counts are over distinct cases (a case counts once per tag no matter how
often the tag's keywords appear), percentages are against the total case
count and reported to one decimal, and filtering is strict AND logic with
the justifying highlight spans attached to every returned case.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

from .cluster import SubGroup
from .errors import UnknownTag
from .records import CaseRecord, HighlightSpan

TAG_CATEGORIES = (
    "case_topics",
    "severity_indicators",
    "platforms",
    "investigation_types",
    "relationships",
    "rso",
)

CASE_TYPE_TOPICS = ("production", "possession", "hands_on", "online_digital")

_TOKEN_RE = re.compile(r"[a-z]+")

DEFAULT_STOPWORDS = frozenset(
    """that with this from were have been they them their there which will would
    should could into about other these those then than also each over such
    only more most some what your when where while after before being
    because""".split()
)


@dataclass(frozen=True)
class TagStat:
    name: str
    count: int
    percent: float

    def to_dict(self) -> dict:
        return {"name": self.name, "count": self.count, "percent": self.percent}


@dataclass
class InsightReport:
    total_cases: int
    platform_stats: list[TagStat]
    severity_distribution: list[TagStat]
    topic_stats: list[TagStat]
    patterns: dict
    keywords_global: list[tuple[str, int]]
    keywords_per_group: dict[str, list[tuple[str, int]]]
    platform_trends: dict[str, list[TagStat]] = field(default_factory=dict)
    agency_stats: list[TagStat] = field(default_factory=list)
    # Raw joint counts only; correlation statistics are out of scope.
    topic_cooccurrence: list[tuple[str, str, int]] = field(default_factory=list)
    platform_severity_counts: list[tuple[str, str, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "total_cases": self.total_cases,
            "platform_stats": [s.to_dict() for s in self.platform_stats],
            "severity_distribution": [s.to_dict() for s in self.severity_distribution],
            "topic_stats": [s.to_dict() for s in self.topic_stats],
            "patterns": self.patterns,
            "keywords_global": [list(k) for k in self.keywords_global],
            "keywords_per_group": {
                gid: [list(k) for k in tokens] for gid, tokens in self.keywords_per_group.items()
            },
            "platform_trends": {
                year: [s.to_dict() for s in stats] for year, stats in self.platform_trends.items()
            },
            "agency_stats": [s.to_dict() for s in self.agency_stats],
            "topic_cooccurrence": [list(t) for t in self.topic_cooccurrence],
            "platform_severity_counts": [list(t) for t in self.platform_severity_counts],
        }


@dataclass(frozen=True)
class TagQuery:
    """Non-empty set of (category, tag) selections, combined with AND logic."""

    tags: tuple[tuple[str, str], ...]

    @classmethod
    def of(cls, *tags: tuple[str, str]) -> "TagQuery":
        return cls(tags=tuple(tags))


@dataclass
class FilterHit:
    record: CaseRecord
    spans: list[HighlightSpan]
    # Tags that match by default value (relationship "stranger", rso false)
    # are justified by absence and carry no span.
    defaulted_tags: list[tuple[str, str]] = field(default_factory=list)


def case_tags(record: CaseRecord, category: str) -> set[str]:
    """The tag set one case carries for a category."""
    fs = record.features
    if category == "case_topics":
        return set(fs.case_topics)
    if category == "severity_indicators":
        return set(fs.severity_indicators)
    if category == "platforms":
        return set(fs.platforms)
    if category == "investigation_types":
        return set(fs.investigation_type or ())
    if category == "relationships":
        return {fs.relationship_to_victim}
    if category == "rso":
        return {"true" if fs.registered_sex_offender else "false"}
    raise UnknownTag(f"unknown tag category {category!r}")


def _tag_counts(records: list[CaseRecord], category: str) -> Counter:
    counts: Counter = Counter()
    for record in records:
        counts.update(case_tags(record, category))
    return counts


def _stats(counts: Counter, total: int) -> list[TagStat]:
    stats = [
        TagStat(name=name, count=count, percent=round(100.0 * count / total, 1) if total else 0.0)
        for name, count in counts.items()
    ]
    stats.sort(key=lambda s: (-s.count, s.name))
    return stats


def extract_keywords(
    texts: list[str],
    top_k: int,
    min_length: int = 4,
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
) -> list[tuple[str, int]]:
    """Most frequent narrative tokens: lowercase alphabetic runs of at least
    ``min_length`` letters, stopwords removed, ranked by total frequency with
    alphabetical tie-breaks."""
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    counts: Counter = Counter()
    for text in texts:
        for token in _TOKEN_RE.findall(text.lower()):
            if len(token) >= min_length and token not in stopwords:
                counts[token] += 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:top_k]


def compute_insights(
    records: list[CaseRecord],
    groups: list[SubGroup],
    top_k: int = 10,
    min_length: int = 4,
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
) -> InsightReport:
    """Aggregate statistics, pattern detection and keyword extraction."""
    total = len(records)
    platform_counts = _tag_counts(records, "platforms")
    severity_counts = _tag_counts(records, "severity_indicators")
    topic_counts = _tag_counts(records, "case_topics")
    agency_counts: Counter = Counter()
    for record in records:
        agency_counts.update(record.features.agencies)

    rso_count = sum(1 for r in records if r.features.registered_sex_offender)
    type_counts = {t: topic_counts.get(t, 0) for t in CASE_TYPE_TOPICS}
    dominant = max(type_counts, key=lambda t: (type_counts[t], t)) if any(type_counts.values()) else None
    patterns = {
        "rso_count": rso_count,
        "rso_percent": round(100.0 * rso_count / total, 1) if total else 0.0,
        "stranger_cases": topic_counts.get("stranger", 0),
        "family_cases": topic_counts.get("family", 0),
        "dominant_case_type": dominant,
    }

    by_id = {r.case_id: r for r in records}
    keywords_per_group = {}
    for group in groups:
        texts = [by_id[i].raw_text for i in group.member_case_ids if i in by_id]
        keywords_per_group[group.group_id] = extract_keywords(texts, top_k, min_length, stopwords)

    trends: dict[str, list[TagStat]] = {}
    for year in sorted({r.year for r in records}):
        year_records = [r for r in records if r.year == year]
        trends[year] = _stats(_tag_counts(year_records, "platforms"), len(year_records))

    cooccurrence: Counter = Counter()
    cross: Counter = Counter()
    for record in records:
        topics = sorted(record.features.case_topics)
        for i, a in enumerate(topics):
            for b in topics[i + 1 :]:
                cooccurrence[(a, b)] += 1
        for platform in sorted(record.features.platforms):
            for indicator in sorted(record.features.severity_indicators):
                cross[(platform, indicator)] += 1

    def _pairs(counts: Counter) -> list[tuple[str, str, int]]:
        return sorted(((a, b, n) for (a, b), n in counts.items()), key=lambda t: (-t[2], t[0], t[1]))

    return InsightReport(
        total_cases=total,
        platform_stats=_stats(platform_counts, total),
        severity_distribution=_stats(severity_counts, total),
        topic_stats=_stats(topic_counts, total),
        patterns=patterns,
        keywords_global=extract_keywords([r.raw_text for r in records], top_k, min_length, stopwords),
        keywords_per_group=keywords_per_group,
        platform_trends=trends,
        agency_stats=_stats(agency_counts, total),
        topic_cooccurrence=_pairs(cooccurrence),
        platform_severity_counts=_pairs(cross),
    )


_SPAN_PATHS = {
    "case_topics": lambda tag: (f"case_topics.{tag}",),
    "severity_indicators": lambda tag: (f"severity_indicators.{tag}",),
    "platforms": lambda tag: (f"platforms.{tag}",),
    "investigation_types": lambda tag: (f"investigation_type.{tag}",),
    "relationships": lambda tag: (f"relationship_to_victim.{tag}",),
    "rso": lambda tag: ("registered_sex_offender",),
}

# Tags that hold by default, justified by the absence of contrary evidence.
_DEFAULT_TAGS = {("relationships", "stranger"), ("rso", "false")}


def tag_vocabularies(vocabularies: dict[str, frozenset[str]]) -> dict[str, list[str]]:
    """The selectable tags per filter category, sorted for stable display."""
    return {
        "case_topics": sorted(vocabularies["case_topics"]),
        "severity_indicators": sorted(vocabularies["severity_indicators"]),
        "platforms": sorted(vocabularies["platforms"]),
        "investigation_types": sorted(vocabularies["investigation_types"]),
        "relationships": sorted(vocabularies["relationships"]),
        "rso": sorted(vocabularies["rso"]),
    }


def filter_by_tags(
    records: list[CaseRecord],
    query: TagQuery,
    vocabularies: dict[str, frozenset[str]] | None = None,
) -> list[FilterHit]:
    """Cases carrying ALL selected tags, with justifying spans per tag.

    Raises UnknownTag for a category outside the six filterable ones or a tag
    outside its category's vocabulary (when vocabularies are supplied).
    """
    if not query.tags:
        raise UnknownTag("query must select at least one tag")
    for category, tag in query.tags:
        if category not in TAG_CATEGORIES:
            raise UnknownTag(f"unknown tag category {category!r}")
        if vocabularies is not None:
            vocab_key = category
            if tag not in vocabularies.get(vocab_key, frozenset()):
                raise UnknownTag(f"tag {tag!r} not in {category} vocabulary")

    hits = []
    for record in records:
        if not all(tag in case_tags(record, category) for category, tag in query.tags):
            continue
        spans: list[HighlightSpan] = []
        defaulted: list[tuple[str, str]] = []
        for category, tag in query.tags:
            paths = _SPAN_PATHS[category](tag)
            matching = [s for s in record.spans if s.feature_path in paths]
            if matching:
                spans.extend(matching)
            elif (category, tag) in _DEFAULT_TAGS:
                defaulted.append((category, tag))
        hits.append(FilterHit(record=record, spans=spans, defaulted_tags=defaulted))
    return hits
