"""Layer 1: consume source documents, produce cleaned text plus metadata.

Plain text is the primary format; PDF support is an adapter behind the same
interface. All operations are deterministic: identical input bytes produce
identical output (timestamps aside), and cleaning is idempotent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import EmptyDocument
from .pdftext import extract_pdf_text

# A standalone page-number line: bare digits, optionally "Page N" or "N of M".
_PAGE_NUMBER_RE = re.compile(r"^(?:page\s+)?\d{1,4}(?:\s+of\s+\d{1,4})?$", re.IGNORECASE)
_WS_RUN_RE = re.compile(r"[ \t]+")
_YEAR_TOKEN_RE = re.compile(r"(?<!\d)(\d{4})(?!\d)")

YEAR_MIN, YEAR_MAX = 1990, 2100


@dataclass
class RawDocument:
    source_path: str
    source_org: str
    report_year: int | None
    cleaned_text: str
    char_count: int
    ingested_at: str


def extract_text(source_path: str | Path, format: str = "plain_text") -> str:
    """Raw text of a source document, pages joined by a newline for PDFs.

    Plain text is returned verbatim; invalid UTF-8 bytes are replaced with
    the Unicode replacement character.
    """
    path = Path(source_path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    if format == "pdf":
        text = extract_pdf_text(str(path))
    elif format == "plain_text":
        text = path.read_text(encoding="utf-8", errors="replace")
    else:
        raise ValueError(f"unsupported format: {format!r}")
    if not text:
        raise EmptyDocument(f"{path}: zero extractable characters")
    return text


def clean_text(raw: str) -> str:
    """Normalize whitespace and drop page-number artifact lines.

    Runs of spaces/tabs collapse to one space, trailing whitespace is
    stripped from every line, standalone page-number lines are removed, and
    runs of three or more newlines collapse to two. Applying the function a
    second time changes nothing.
    """
    text = raw.replace("\r\n", "\n").replace("\r", "\n")
    lines = []
    for line in text.split("\n"):
        line = _WS_RUN_RE.sub(" ", line).rstrip()
        if _PAGE_NUMBER_RE.match(line.strip()):
            continue
        lines.append(line)
    text = "\n".join(lines)
    return re.sub(r"\n{3,}", "\n\n", text)


def detect_source_org(filename: str, known_orgs: list[tuple[str, str]]) -> str:
    """Canonical organization name for a filename, or "UNKNOWN".

    Each entry is (pattern, canonical name); the first case-insensitive
    substring match wins.
    """
    lowered = filename.lower()
    for pattern, name in known_orgs:
        if pattern.lower() in lowered:
            return name
    return "UNKNOWN"


def infer_year(filename: str) -> int | None:
    """First 4-digit token in the filename that looks like a report year."""
    for token in _YEAR_TOKEN_RE.findall(filename):
        year = int(token)
        if YEAR_MIN <= year <= YEAR_MAX:
            return year
    return None


def guess_format(path: str | Path) -> str:
    return "pdf" if str(path).lower().endswith(".pdf") else "plain_text"


def ingest_document(
    source_path: str | Path,
    known_orgs: list[tuple[str, str]],
    format: str | None = None,
    org: str | None = None,
    year: int | None = None,
) -> RawDocument:
    """Full ingestion of one document: extract, clean, infer metadata."""
    path = Path(source_path)
    fmt = format or guess_format(path)
    cleaned = clean_text(extract_text(path, fmt))
    return RawDocument(
        source_path=str(path),
        source_org=org or detect_source_org(path.name, known_orgs),
        report_year=year if year is not None else infer_year(path.name),
        cleaned_text=cleaned,
        char_count=len(cleaned),
        ingested_at=datetime.now(timezone.utc).isoformat(),
    )
