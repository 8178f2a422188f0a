"""Layer 2a: segment a cleaned multi-case document into individual case texts.

Report documents open each case summary with a temporal phrase ("In January
of 2012, ..."), so those markers double as segment boundaries. Text before
the first marker (report preamble) is not part of any case segment.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from .errors import NoMarkersFound

logger = logging.getLogger(__name__)

# Ordered by precedence: when two patterns match at the same offset, the
# earliest-listed one wins.
TEMPORAL_PATTERNS: list[re.Pattern[str]] = [
    re.compile(r"In\s+([A-Z][a-z]+)\s+of\s+(\d{4})"),  # "In January of 2012"
    re.compile(r"In\s+([A-Z][a-z]+)\s+(\d{4})"),       # "In January 2012"
    re.compile(r"([A-Z][a-z]+)\s+(\d{4}),"),           # "January 2012,"
]

MONTHS = (
    "January", "February", "March", "April", "May", "June",
    "July", "August", "September", "October", "November", "December",
)
_MONTH_SET = frozenset(MONTHS)
MONTH_ORDINAL = {name: i + 1 for i, name in enumerate(MONTHS)}


@dataclass(frozen=True)
class TemporalMarker:
    start_offset: int
    month: str
    year: str
    matched_text: str


@dataclass
class CaseSegment:
    case_id: str
    text: str
    month: str
    year: str
    source_org: str
    sequence_number: int


def find_markers(text: str) -> list[TemporalMarker]:
    """All temporal markers in the text, sorted by position.

    Matches of the three temporal patterns are deduplicated by start offset
    (earliest-listed pattern wins) and filtered to real month names, which
    rejects look-alikes such as "Phoenix 2012,".
    """
    by_offset: dict[int, TemporalMarker] = {}
    for pattern in TEMPORAL_PATTERNS:
        for m in pattern.finditer(text):
            if m.group(1) not in _MONTH_SET:
                continue
            by_offset.setdefault(
                m.start(),
                TemporalMarker(
                    start_offset=m.start(),
                    month=m.group(1),
                    year=m.group(2),
                    matched_text=m.group(0),
                ),
            )
    return sorted(by_offset.values(), key=lambda marker: marker.start_offset)


def batch_cases(text: str, org_name: str, year: str) -> list[CaseSegment]:
    """Split text into one CaseSegment per temporal marker.

    Segment i spans from its marker to the next marker (the last one runs to
    the end of the text). Case ids embed the batch ``year`` argument while
    each segment records its own marker's year; a mismatch between the two is
    logged as a warning rather than silently rewritten.
    """
    if not org_name:
        raise ValueError("org_name must be non-empty")
    if not re.fullmatch(r"\d{4}", year):
        raise ValueError(f"year must be 4 digits, got {year!r}")

    markers = find_markers(text)
    if not markers:
        raise NoMarkersFound("document has zero temporal markers")

    segments = []
    for i, marker in enumerate(markers):
        start = marker.start_offset
        end = markers[i + 1].start_offset if i + 1 < len(markers) else len(text)
        case_id = f"{org_name}_{year}_{marker.month.lower()}_{i + 1:03d}"
        if marker.year != year:
            logger.warning(
                "%s: marker year %s differs from batch year %s", case_id, marker.year, year
            )
        segments.append(
            CaseSegment(
                case_id=case_id,
                text=text[start:end].strip(),
                month=marker.month,
                year=marker.year,
                source_org=org_name,
                sequence_number=i + 1,
            )
        )
    return segments


def whole_document_segment(text: str, org_name: str, year: str) -> CaseSegment:
    """Fallback for markerless documents: the whole text as one case."""
    if not text.strip():
        raise ValueError("document text is empty")
    return CaseSegment(
        case_id=f"{org_name}_{year}_unknown_001",
        text=text.strip(),
        month="Unknown",
        year=year,
        source_org=org_name,
        sequence_number=1,
    )
