"""Core data model: feature sets, provenance spans, and case records.

Serialization is canonical so stored bytes are deterministic: sets become
sorted arrays, and JSON objects are emitted with sorted keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any


@dataclass(frozen=True)
class EvidenceStorage:
    magnitude: float
    unit: str  # "GB" or "TB"

    def to_dict(self) -> dict[str, Any]:
        return {"magnitude": self.magnitude, "unit": self.unit}


@dataclass
class FeatureSet:
    """Structured fields plus semantic tag sets extracted from one case narrative."""

    perpetrator_age: int | None = None
    registered_sex_offender: bool = False
    relationship_to_victim: str = "stranger"
    victim_count: int | None = None
    victim_ages: set[int] = field(default_factory=set)
    victim_gender: str | None = None
    platforms: set[str] = field(default_factory=set)
    investigation_type: set[str] | None = None
    agencies: set[str] = field(default_factory=set)
    prosecution: set[str] = field(default_factory=set)
    charges: list[str] = field(default_factory=list)
    jail_info: str | None = None
    evidence_images: int | None = None
    evidence_videos: int | None = None
    evidence_storage: EvidenceStorage | None = None
    evidence_messages: int | None = None
    severity_indicators: set[str] = field(default_factory=set)
    case_topics: set[str] = field(default_factory=set)
    severity_phrases: set[str] = field(default_factory=set)

    def mentions_evidence(self) -> bool:
        return any(
            v is not None
            for v in (
                self.evidence_images,
                self.evidence_videos,
                self.evidence_storage,
                self.evidence_messages,
            )
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "perpetrator_age": self.perpetrator_age,
            "registered_sex_offender": self.registered_sex_offender,
            "relationship_to_victim": self.relationship_to_victim,
            "victim_count": self.victim_count,
            "victim_ages": sorted(self.victim_ages),
            "victim_gender": self.victim_gender,
            "platforms": sorted(self.platforms),
            "investigation_type": (
                None if self.investigation_type is None else sorted(self.investigation_type)
            ),
            "agencies": sorted(self.agencies),
            "prosecution": sorted(self.prosecution),
            "charges": list(self.charges),
            "jail_info": self.jail_info,
            "evidence_images": self.evidence_images,
            "evidence_videos": self.evidence_videos,
            "evidence_storage": (
                None if self.evidence_storage is None else self.evidence_storage.to_dict()
            ),
            "evidence_messages": self.evidence_messages,
            "severity_indicators": sorted(self.severity_indicators),
            "case_topics": sorted(self.case_topics),
            "severity_phrases": sorted(self.severity_phrases),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "FeatureSet":
        storage = d.get("evidence_storage")
        inv = d.get("investigation_type")
        return cls(
            perpetrator_age=d.get("perpetrator_age"),
            registered_sex_offender=bool(d.get("registered_sex_offender", False)),
            relationship_to_victim=d.get("relationship_to_victim", "stranger"),
            victim_count=d.get("victim_count"),
            victim_ages=set(d.get("victim_ages", [])),
            victim_gender=d.get("victim_gender"),
            platforms=set(d.get("platforms", [])),
            investigation_type=None if inv is None else set(inv),
            agencies=set(d.get("agencies", [])),
            prosecution=set(d.get("prosecution", [])),
            charges=list(d.get("charges", [])),
            jail_info=d.get("jail_info"),
            evidence_images=d.get("evidence_images"),
            evidence_videos=d.get("evidence_videos"),
            evidence_storage=(
                None
                if storage is None
                else EvidenceStorage(float(storage["magnitude"]), storage["unit"])
            ),
            evidence_messages=d.get("evidence_messages"),
            severity_indicators=set(d.get("severity_indicators", [])),
            case_topics=set(d.get("case_topics", [])),
            severity_phrases=set(d.get("severity_phrases", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "FeatureSet":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class HighlightSpan:
    """Byte-offset region of a case text that justifies one extracted feature.

    Offsets index into the case's raw text, end-exclusive, and always satisfy
    ``raw_text[start:end] == matched_text``. ``rule_id`` identifies the
    pattern or keyword that fired, which is what makes extractions auditable.
    """

    case_id: str
    feature_path: str
    start: int
    end: int
    matched_text: str
    rule_id: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "case_id": self.case_id,
            "feature_path": self.feature_path,
            "start": self.start,
            "end": self.end,
            "matched_text": self.matched_text,
            "rule_id": self.rule_id,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "HighlightSpan":
        return cls(
            case_id=d["case_id"],
            feature_path=d["feature_path"],
            start=int(d["start"]),
            end=int(d["end"]),
            matched_text=d["matched_text"],
            rule_id=d["rule_id"],
        )

    def rebind(self, case_id: str) -> "HighlightSpan":
        return replace(self, case_id=case_id)


@dataclass
class CaseRecord:
    """One segmented case: identity, raw text, extracted features, provenance."""

    case_id: str
    source_org: str
    year: str
    month: str
    raw_text: str
    features: FeatureSet
    spans: list[HighlightSpan] = field(default_factory=list)
    created_at: str = ""

    def spans_json(self) -> str:
        return json.dumps([s.to_dict() for s in self.spans], sort_keys=True, ensure_ascii=False)

    @staticmethod
    def spans_from_json(text: str) -> list[HighlightSpan]:
        return [HighlightSpan.from_dict(d) for d in json.loads(text)]
