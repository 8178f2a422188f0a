"""Layer 4b: priority triage.

Each case gets six factor scores in [0, 1], combined into a raw weighted
score and affinely normalized across the batch to a 5-10 scale (5 = lowest,
10 = highest). Normalization is order-preserving, so rankings are unchanged
by it, and scaling all weights by a positive constant leaves rankings
unchanged too. Every factor in the result is traceable to the highlight
spans that produced its features.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyInput
from .records import CaseRecord, FeatureSet, HighlightSpan

FACTORS = (
    "severity_indicators",
    "victim_count",
    "case_type",
    "severity_phrases",
    "evidence_volume",
    "registered_offender",
)

BANDS = (("High", 8.0, 10.0), ("Medium", 6.0, 8.0), ("Low", 5.0, 6.0))


@dataclass(frozen=True)
class TriageWeights:
    severity_indicators: float = 0.35
    victim_count: float = 0.30
    case_type: float = 0.25
    severity_phrases: float = 0.15
    evidence_volume: float = 0.10
    registered_offender: float = 0.10

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in FACTORS}

    def scaled(self, factor: float) -> "TriageWeights":
        return TriageWeights(**{name: factor * w for name, w in self.as_dict().items()})

    @classmethod
    def from_config(cls, weights: dict[str, float]) -> "TriageWeights":
        return cls(**{name: float(weights[name]) for name in FACTORS})


@dataclass(frozen=True)
class FactorTables:
    """Sub-score tables behind the factor functions; config-overridable."""

    severity_scores: dict[str, float]
    case_type_scores: dict[str, float]
    victim_count_cap: int = 5
    evidence_full_images: int = 1000
    phrase_vocab_size: int = 6

    @classmethod
    def default(cls) -> "FactorTables":
        return cls(
            severity_scores={
                "infant": 1.0,
                "sexual_assault": 0.8,
                "very_young": 0.7,
                "under_10": 0.6,
                "production": 0.5,
            },
            case_type_scores={
                "production": 1.0,
                "hands_on": 0.9,
                "online_digital": 0.5,
                "possession": 0.4,
            },
        )

    @classmethod
    def from_config(cls, triage_cfg: dict, phrase_vocab_size: int) -> "FactorTables":
        return cls(
            severity_scores={k: float(v) for k, v in triage_cfg["severity_scores"].items()},
            case_type_scores={k: float(v) for k, v in triage_cfg["case_type_scores"].items()},
            victim_count_cap=int(triage_cfg.get("victim_count_cap", 5)),
            evidence_full_images=int(triage_cfg.get("evidence_full_images", 1000)),
            phrase_vocab_size=phrase_vocab_size,
        )


@dataclass
class PriorityResult:
    case_id: str
    factor_scores: dict[str, float]
    raw_score: float
    normalized_score: float
    rank: int
    band: str
    explanation: list[dict]

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "factor_scores": self.factor_scores,
            "raw_score": self.raw_score,
            "normalized_score": self.normalized_score,
            "rank": self.rank,
            "band": self.band,
            "explanation": self.explanation,
        }


def factor_scores(features: FeatureSet, tables: FactorTables | None = None) -> dict[str, float]:
    """The six factor values in [0, 1] for one case."""
    t = tables or FactorTables.default()
    fs = features

    severity = 0.0
    if fs.severity_indicators:
        severity = max(t.severity_scores.get(tag, 0.0) for tag in fs.severity_indicators)

    if fs.victim_count is None:
        victims = 0.0
    else:
        victims = min(fs.victim_count, t.victim_count_cap) / t.victim_count_cap

    case_type = 0.0
    type_hits = [t.case_type_scores[tag] for tag in fs.case_topics if tag in t.case_type_scores]
    if type_hits:
        case_type = max(type_hits)

    phrases = len(fs.severity_phrases) / t.phrase_vocab_size

    if (fs.evidence_storage is not None and fs.evidence_storage.unit == "TB") or (
        fs.evidence_images is not None and fs.evidence_images >= t.evidence_full_images
    ):
        evidence = 1.0
    elif fs.mentions_evidence():
        evidence = 0.5
    else:
        evidence = 0.0

    return {
        "severity_indicators": severity,
        "victim_count": victims,
        "case_type": case_type,
        "severity_phrases": phrases,
        "evidence_volume": evidence,
        "registered_offender": 1.0 if fs.registered_sex_offender else 0.0,
    }


def raw_score(factors: dict[str, float], w: TriageWeights | None = None) -> float:
    weights = w or TriageWeights()
    total = 0.0
    for name in FACTORS:
        total += getattr(weights, name) * factors[name]
    return total


def normalize(raw_scores: list[float]) -> list[float]:
    """Affine rescale to [5, 10]; a spread-free batch maps everything to 5.0."""
    if not raw_scores:
        raise EmptyInput("normalize requires at least one score")
    lo, hi = min(raw_scores), max(raw_scores)
    if hi == lo:
        return [5.0 for _ in raw_scores]
    return [5.0 + 5.0 * (s - lo) / (hi - lo) for s in raw_scores]


def band_of(normalized_score: float) -> str:
    if normalized_score >= 8.0:
        return "High"
    if normalized_score >= 6.0:
        return "Medium"
    return "Low"


_FACTOR_SPAN_PREFIXES = {
    "severity_indicators": ("severity_indicators.",),
    "victim_count": ("victim_count",),
    "case_type": ("case_topics.",),
    "severity_phrases": ("severity_phrases.",),
    "evidence_volume": ("evidence_",),
    "registered_offender": ("registered_sex_offender",),
}


def _factor_spans(factor: str, spans: list[HighlightSpan]) -> list[dict]:
    prefixes = _FACTOR_SPAN_PREFIXES[factor]
    return [
        {
            "feature_path": s.feature_path,
            "start": s.start,
            "end": s.end,
            "matched_text": s.matched_text,
            "rule_id": s.rule_id,
        }
        for s in spans
        if any(s.feature_path.startswith(p) for p in prefixes)
    ]


def rank_cases(
    records: list[CaseRecord],
    w: TriageWeights | None = None,
    tables: FactorTables | None = None,
) -> list[PriorityResult]:
    """Score, normalize and rank a batch of cases.

    Results are ordered by descending normalized score; ties break by raw
    score (descending) then case id. Empty input yields an empty list.
    """
    if not records:
        return []
    weights = w or TriageWeights()
    t = tables or FactorTables.default()

    scored = []
    for record in records:
        factors = factor_scores(record.features, t)
        scored.append((record, factors, raw_score(factors, weights)))
    normalized = normalize([s[2] for s in scored])

    order = sorted(range(len(scored)), key=lambda i: (-scored[i][2], scored[i][0].case_id))
    results = []
    for rank, i in enumerate(order, start=1):
        record, factors, raw = scored[i]
        explanation = [
            {
                "factor": name,
                "weight": getattr(weights, name),
                "value": factors[name],
                "spans": _factor_spans(name, record.spans),
            }
            for name in FACTORS
        ]
        results.append(
            PriorityResult(
                case_id=record.case_id,
                factor_scores=factors,
                raw_score=raw,
                normalized_score=normalized[i],
                rank=rank,
                band=band_of(normalized[i]),
                explanation=explanation,
            )
        )
    return results
