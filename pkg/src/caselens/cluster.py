"""Layer 4a: two-stage clustering.

Stage 1 assigns every case to predefined external clusters by topic criteria
(membership can overlap; the General cluster always matches, so coverage is
total). Stage 2 forms sub-groups inside each external cluster by weighted
Jaccard similarity over six feature dimensions, linking pairs at or above a
configurable threshold and taking connected components of size two or more.

Missing data never fakes agreement: a dimension empty on both sides is
"absent" and contributes nothing, while a dimension present on exactly one
side scores a plain Jaccard of zero.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

from .records import CaseRecord, FeatureSet

DIMENSIONS = ("platforms", "demographics", "topics", "investigation", "severity", "relationship")

EXTERNAL_CLUSTERS = ("Online-Digital", "Possession", "Investigation", "Severe", "General")

DEFAULT_SEVERE_MARKERS = frozenset(
    {"infant", "very_young", "under_10", "sexual_assault", "production"}
)

DEFAULT_THRESHOLD = 0.35


@dataclass(frozen=True)
class SimilarityWeights:
    platforms: float = 0.25
    demographics: float = 0.20
    topics: float = 0.20
    investigation: float = 0.15
    severity: float = 0.15
    relationship: float = 0.05

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in DIMENSIONS}

    def total(self) -> float:
        total = 0.0
        for name in DIMENSIONS:
            total += getattr(self, name)
        return total

    def scaled(self, factor: float) -> "SimilarityWeights":
        return SimilarityWeights(**{name: factor * w for name, w in self.as_dict().items()})

    @classmethod
    def from_config(cls, weights: dict[str, float]) -> "SimilarityWeights":
        return cls(**{name: float(weights[name]) for name in DIMENSIONS})


@dataclass
class SimilarityBreakdown:
    """Per-dimension Jaccard values (None where both sides lack the dimension)."""

    dimensions: dict[str, float | None]
    total: float


@dataclass
class SubGroup:
    group_id: str
    cluster_name: str
    member_case_ids: list[str]
    mean_pairwise_similarity: float
    shared_characteristics: dict[str, list[str]]
    description: str

    def to_dict(self) -> dict:
        return {
            "group_id": self.group_id,
            "cluster_name": self.cluster_name,
            "member_case_ids": list(self.member_case_ids),
            "mean_pairwise_similarity": self.mean_pairwise_similarity,
            "shared_characteristics": self.shared_characteristics,
            "description": self.description,
        }


@dataclass
class ClusterEntry:
    name: str
    case_ids: list[str]
    coverage_percent: float
    avg_similarity: float | None
    subgroups: list[SubGroup] = field(default_factory=list)
    ungrouped: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "case_ids": list(self.case_ids),
            "size": len(self.case_ids),
            "coverage_percent": self.coverage_percent,
            "avg_similarity": self.avg_similarity,
            "subgroups": [g.to_dict() for g in self.subgroups],
            "ungrouped": list(self.ungrouped),
        }


@dataclass
class ClusterReport:
    total_cases: int
    threshold: float
    weights: dict[str, float]
    clusters: list[ClusterEntry]
    elapsed_ms: float

    def cluster(self, name: str) -> ClusterEntry | None:
        for entry in self.clusters:
            if entry.name == name:
                return entry
        return None

    def to_dict(self) -> dict:
        return {
            "total_cases": self.total_cases,
            "threshold": self.threshold,
            "weights": self.weights,
            "clusters": [c.to_dict() for c in self.clusters],
            "elapsed_ms": self.elapsed_ms,
        }


def _victim_age_bucket(age: int) -> str:
    if age <= 4:
        return "victim_age:0-4"
    if age <= 9:
        return "victim_age:5-9"
    if age <= 13:
        return "victim_age:10-13"
    if age <= 17:
        return "victim_age:14-17"
    return "victim_age:18+"


def _victim_count_bucket(count: int) -> str | None:
    if count >= 5:
        return "victim_count:5+"
    if count >= 2:
        return "victim_count:2-4"
    if count == 1:
        return "victim_count:1"
    return None


def featurize(fs: FeatureSet) -> dict[str, frozenset[str]]:
    """The six dimension sets compared by weighted similarity.

    Numeric demographics are discretized into tokens (age buckets, count
    buckets, perpetrator decade, RSO flag) so Jaccard applies. Defaults give
    empty dimensions: an unflagged RSO and an evidence-free "stranger"
    relationship are treated as missing information, not as agreement.
    """
    demographics: set[str] = set()
    for age in fs.victim_ages:
        demographics.add(_victim_age_bucket(age))
    if fs.victim_count is not None:
        bucket = _victim_count_bucket(fs.victim_count)
        if bucket:
            demographics.add(bucket)
    if fs.perpetrator_age is not None:
        demographics.add(f"perp_age:{(fs.perpetrator_age // 10) * 10}s")
    if fs.registered_sex_offender:
        demographics.add("rso:true")

    if fs.relationship_to_victim != "stranger":
        relationship = {fs.relationship_to_victim}
    elif "stranger" in fs.case_topics:
        relationship = {"stranger"}
    else:
        relationship = set()

    return {
        "platforms": frozenset(fs.platforms),
        "demographics": frozenset(demographics),
        "topics": frozenset(fs.case_topics),
        "investigation": frozenset((fs.investigation_type or set()) | fs.agencies),
        "severity": frozenset(fs.severity_indicators | fs.severity_phrases),
        "relationship": frozenset(relationship),
    }


def jaccard(x: Iterable, y: Iterable) -> float:
    """|x ∩ y| / |x ∪ y|; both empty yields 0 (callers decide absence handling)."""
    xs, ys = set(x), set(y)
    union = len(xs | ys)
    if union == 0:
        return 0.0
    return len(xs & ys) / union


def weighted_similarity(
    a: FeatureSet, b: FeatureSet, w: SimilarityWeights | None = None
) -> SimilarityBreakdown:
    """Weighted sum of per-dimension Jaccard values.

    A dimension empty on both sides is flagged absent (None) and contributes
    nothing; a dimension present on one side only contributes a Jaccard of 0.
    """
    weights = w or SimilarityWeights()
    fa, fb = featurize(a), featurize(b)
    dimensions: dict[str, float | None] = {}
    total = 0.0
    for name in DIMENSIONS:
        xs, ys = fa[name], fb[name]
        if not xs and not ys:
            dimensions[name] = None
            continue
        value = jaccard(xs, ys)
        dimensions[name] = value
        total += getattr(weights, name) * value
    return SimilarityBreakdown(dimensions=dimensions, total=total)


def external_assign(
    record: CaseRecord, severe_markers: frozenset[str] = DEFAULT_SEVERE_MARKERS
) -> set[str]:
    """External cluster names for one case. Always contains "General"."""
    fs = record.features
    clusters = {"General"}
    if "online_digital" in fs.case_topics:
        clusters.add("Online-Digital")
    if "possession" in fs.case_topics:
        clusters.add("Possession")
    if fs.investigation_type:
        clusters.add("Investigation")
    if fs.severity_indicators & severe_markers:
        clusters.add("Severe")
    return clusters


def _pairwise(
    members: list[CaseRecord], w: SimilarityWeights
) -> dict[tuple[str, str], float]:
    sims = {}
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            total = weighted_similarity(members[i].features, members[j].features, w).total
            sims[(members[i].case_id, members[j].case_id)] = total
    return sims


def _components(ids: list[str], edges: set[tuple[str, str]]) -> list[list[str]]:
    adjacency: dict[str, set[str]] = {i: set() for i in ids}
    for a, b in edges:
        adjacency[a].add(b)
        adjacency[b].add(a)
    seen: set[str] = set()
    components = []
    for start in ids:
        if start in seen:
            continue
        stack, component = [start], []
        seen.add(start)
        while stack:
            node = stack.pop()
            component.append(node)
            for neighbor in adjacency[node]:
                if neighbor not in seen:
                    seen.add(neighbor)
                    stack.append(neighbor)
        components.append(sorted(component))
    return components


def _shared_characteristics(members: list[CaseRecord]) -> dict[str, list[str]]:
    shared = {}
    for dim, getter in (
        ("platforms", lambda fs: fs.platforms),
        ("topics", lambda fs: fs.case_topics),
        ("severity", lambda fs: fs.severity_indicators | fs.severity_phrases),
    ):
        common = set(getter(members[0].features))
        for record in members[1:]:
            common &= set(getter(record.features))
        shared[dim] = sorted(common)
    return shared


def _describe(group: SubGroup, threshold: float) -> str:
    bits = [f"{len(group.member_case_ids)} cases linked at similarity >= {threshold:g}"]
    for dim in ("platforms", "topics", "severity"):
        values = group.shared_characteristics.get(dim) or []
        if values:
            bits.append(f"shared {dim}: {', '.join(values)}")
    bits.append(f"mean pairwise similarity {group.mean_pairwise_similarity:.3f}")
    return "; ".join(bits)


def form_subgroups(
    members: list[CaseRecord],
    threshold: float = DEFAULT_THRESHOLD,
    w: SimilarityWeights | None = None,
    cluster_name: str = "General",
) -> list[SubGroup]:
    """Single-linkage sub-groups: connected components of the thresholded
    similarity graph, size two or more. Deterministic: members are ordered by
    case id and groups by their smallest member."""
    weights = w or SimilarityWeights()
    if len(members) < 2:
        return []
    ordered = sorted(members, key=lambda r: r.case_id)
    by_id = {r.case_id: r for r in ordered}
    sims = _pairwise(ordered, weights)
    edges = {pair for pair, total in sims.items() if total >= threshold}
    groups = []
    # Components come back ordered by smallest member id, so numbering here
    # is already deterministic.
    for component in _components([r.case_id for r in ordered], edges):
        if len(component) < 2:
            continue
        pair_values = [
            sims[(a, b)] for k, a in enumerate(component) for b in component[k + 1 :]
        ]
        group = SubGroup(
            group_id=f"{cluster_name.lower()}_{len(groups) + 1:02d}",
            cluster_name=cluster_name,
            member_case_ids=component,
            mean_pairwise_similarity=sum(pair_values) / len(pair_values),
            shared_characteristics=_shared_characteristics([by_id[i] for i in component]),
            description="",
        )
        group.description = _describe(group, threshold)
        groups.append(group)
    return groups


def cluster_all(
    records: list[CaseRecord],
    weights: SimilarityWeights | None = None,
    threshold: float = DEFAULT_THRESHOLD,
    severe_markers: frozenset[str] = DEFAULT_SEVERE_MARKERS,
) -> ClusterReport:
    """Both clustering stages plus per-cluster statistics.

    Average similarity is computed over all member pairs of each cluster
    (not just pairs inside sub-groups); clusters with fewer than two members
    report None.
    """
    w = weights or SimilarityWeights()
    started = time.perf_counter()
    total = len(records)
    membership: dict[str, list[CaseRecord]] = {name: [] for name in EXTERNAL_CLUSTERS}
    for record in records:
        for name in external_assign(record, severe_markers):
            membership[name].append(record)

    clusters = []
    for name in EXTERNAL_CLUSTERS:
        members = sorted(membership[name], key=lambda r: r.case_id)
        sims = _pairwise(members, w)
        avg = sum(sims.values()) / len(sims) if sims else None
        subgroups = form_subgroups(members, threshold, w, cluster_name=name)
        grouped = {case_id for g in subgroups for case_id in g.member_case_ids}
        clusters.append(
            ClusterEntry(
                name=name,
                case_ids=[r.case_id for r in members],
                coverage_percent=round(100.0 * len(members) / total, 1) if total else 0.0,
                avg_similarity=avg,
                subgroups=subgroups,
                ungrouped=[r.case_id for r in members if r.case_id not in grouped],
            )
        )
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    return ClusterReport(
        total_cases=total,
        threshold=threshold,
        weights=w.as_dict(),
        clusters=clusters,
        elapsed_ms=elapsed_ms,
    )
