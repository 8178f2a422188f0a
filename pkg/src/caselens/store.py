"""Layer 3: embedded SQLite persistence with raw-text retention and merge.

One file per deployment, zero configuration. The cases table holds the raw
narrative plus the canonically serialized feature set; victim, perpetrator
and prosecution fields are additionally broken out into normalized tables.
Databases of the same schema version can be merged; collisions keep the
destination row. Single writer, any number of read-only handles.
"""

from __future__ import annotations

import json
import sqlite3
from dataclasses import dataclass
from pathlib import Path

from .batcher import MONTH_ORDINAL
from .errors import SchemaVersionMismatch, StorageError
from .records import CaseRecord, FeatureSet

SCHEMA_VERSION = "1"

CORE_TABLES = ("cases", "victim_demographics", "perpetrator_demographics", "prosecution_outcomes")

_SCHEMA_SQL = """
CREATE TABLE IF NOT EXISTS meta (
    key TEXT PRIMARY KEY,
    value TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS cases (
    case_id TEXT PRIMARY KEY,
    source_org TEXT NOT NULL,
    year TEXT NOT NULL,
    month TEXT NOT NULL,
    raw_text TEXT NOT NULL CHECK (length(raw_text) > 0),
    extracted_features TEXT NOT NULL,
    spans TEXT NOT NULL DEFAULT '[]',
    created_at TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_cases_org_year ON cases (source_org, year);
CREATE TABLE IF NOT EXISTS victim_demographics (
    case_id TEXT PRIMARY KEY REFERENCES cases (case_id) ON DELETE CASCADE,
    victim_count INTEGER,
    victim_ages TEXT,
    victim_gender TEXT
);
CREATE TABLE IF NOT EXISTS perpetrator_demographics (
    case_id TEXT PRIMARY KEY REFERENCES cases (case_id) ON DELETE CASCADE,
    perpetrator_age INTEGER,
    registered_sex_offender INTEGER NOT NULL,
    relationship_to_victim TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS prosecution_outcomes (
    case_id TEXT PRIMARY KEY REFERENCES cases (case_id) ON DELETE CASCADE,
    charges TEXT,
    booking_status TEXT,
    jail_info TEXT
);
"""


@dataclass
class StoreHandle:
    conn: sqlite3.Connection
    path: str
    read_only: bool = False

    def close(self) -> None:
        self.conn.close()


@dataclass
class CaseFilter:
    org: str | None = None
    year_from: int | None = None
    year_to: int | None = None
    month: str | None = None
    case_ids: list[str] | None = None


@dataclass
class MergeReport:
    copied: int
    skipped_collisions: int


def _connect(db_path: str | Path, read_only: bool = False) -> sqlite3.Connection:
    if read_only:
        conn = sqlite3.connect(f"file:{Path(db_path)}?mode=ro", uri=True)
    else:
        conn = sqlite3.connect(str(db_path))
    conn.execute("PRAGMA foreign_keys = ON")
    return conn


def _stored_version(conn: sqlite3.Connection) -> str | None:
    try:
        row = conn.execute("SELECT value FROM meta WHERE key = 'schema_version'").fetchone()
    except sqlite3.DatabaseError:
        return None
    return row[0] if row else None


def _check_version(conn: sqlite3.Connection, path: str | Path) -> None:
    version = _stored_version(conn)
    if version != SCHEMA_VERSION:
        conn.close()
        raise SchemaVersionMismatch(
            f"{path}: schema version {version!r}, expected {SCHEMA_VERSION!r}"
        )


def init_schema(db_path: str | Path) -> StoreHandle:
    """Create (or validate) the store at db_path. Idempotent for same-version files."""
    path = Path(db_path)
    existing = path.exists() and path.stat().st_size > 0
    try:
        conn = _connect(path)
    except sqlite3.Error as exc:
        raise StorageError(f"{path}: {exc}") from exc
    if existing:
        _check_version(conn, path)
        return StoreHandle(conn, str(path))
    try:
        with conn:
            conn.executescript(_SCHEMA_SQL)
            conn.execute(
                "INSERT OR REPLACE INTO meta (key, value) VALUES ('schema_version', ?)",
                (SCHEMA_VERSION,),
            )
    except sqlite3.Error as exc:
        conn.close()
        raise StorageError(f"{path}: {exc}") from exc
    return StoreHandle(conn, str(path))


def open_store(db_path: str | Path, read_only: bool = False) -> StoreHandle:
    """Open an existing store, verifying the schema version."""
    path = Path(db_path)
    if not path.is_file():
        raise FileNotFoundError(f"no such database: {path}")
    conn = _connect(path, read_only=read_only)
    _check_version(conn, path)
    return StoreHandle(conn, str(path), read_only=read_only)


def upsert_case(handle: StoreHandle, record: CaseRecord) -> None:
    """Write the cases row plus the three normalized rows atomically.

    Re-upserting a case_id replaces every row but keeps the original
    created_at, so re-running ingestion leaves the database byte-identical.
    """
    fs = record.features
    try:
        with handle.conn:
            prior = handle.conn.execute(
                "SELECT created_at FROM cases WHERE case_id = ?", (record.case_id,)
            ).fetchone()
            created_at = prior[0] if prior else record.created_at
            handle.conn.execute(
                """
                INSERT OR REPLACE INTO cases
                    (case_id, source_org, year, month, raw_text, extracted_features, spans, created_at)
                VALUES (?, ?, ?, ?, ?, ?, ?, ?)
                """,
                (
                    record.case_id,
                    record.source_org,
                    record.year,
                    record.month,
                    record.raw_text,
                    fs.to_json(),
                    record.spans_json(),
                    created_at,
                ),
            )
            handle.conn.execute(
                "INSERT OR REPLACE INTO victim_demographics VALUES (?, ?, ?, ?)",
                (
                    record.case_id,
                    fs.victim_count,
                    json.dumps(sorted(fs.victim_ages)),
                    fs.victim_gender,
                ),
            )
            handle.conn.execute(
                "INSERT OR REPLACE INTO perpetrator_demographics VALUES (?, ?, ?, ?)",
                (
                    record.case_id,
                    fs.perpetrator_age,
                    int(fs.registered_sex_offender),
                    fs.relationship_to_victim,
                ),
            )
            handle.conn.execute(
                "INSERT OR REPLACE INTO prosecution_outcomes VALUES (?, ?, ?, ?)",
                (
                    record.case_id,
                    json.dumps(list(fs.charges)),
                    json.dumps(sorted(fs.prosecution)),
                    fs.jail_info,
                ),
            )
    except sqlite3.Error as exc:
        raise StorageError(f"upsert of {record.case_id} failed and was rolled back: {exc}") from exc


def _row_to_record(row: tuple) -> CaseRecord:
    case_id, source_org, year, month, raw_text, features_json, spans_json, created_at = row
    return CaseRecord(
        case_id=case_id,
        source_org=source_org,
        year=year,
        month=month,
        raw_text=raw_text,
        features=FeatureSet.from_json(features_json),
        spans=CaseRecord.spans_from_json(spans_json),
        created_at=created_at,
    )


def query_cases(handle: StoreHandle, filter: CaseFilter | None = None) -> list[CaseRecord]:
    """Matching records ordered by (year, month, case_id). Empty filter returns all."""
    f = filter or CaseFilter()
    clauses, params = [], []
    if f.org is not None:
        clauses.append("source_org = ?")
        params.append(f.org)
    if f.year_from is not None:
        clauses.append("CAST(year AS INTEGER) >= ?")
        params.append(f.year_from)
    if f.year_to is not None:
        clauses.append("CAST(year AS INTEGER) <= ?")
        params.append(f.year_to)
    if f.month is not None:
        clauses.append("month = ?")
        params.append(f.month)
    if f.case_ids is not None:
        placeholders = ",".join("?" for _ in f.case_ids)
        clauses.append(f"case_id IN ({placeholders})")
        params.extend(f.case_ids)
    sql = (
        "SELECT case_id, source_org, year, month, raw_text, extracted_features, spans, created_at"
        " FROM cases"
    )
    if clauses:
        sql += " WHERE " + " AND ".join(clauses)
    rows = handle.conn.execute(sql, params).fetchall()
    records = [_row_to_record(r) for r in rows]
    records.sort(key=lambda r: (r.year, MONTH_ORDINAL.get(r.month, 0), r.case_id))
    return records


def case_count(handle: StoreHandle) -> int:
    return handle.conn.execute("SELECT COUNT(*) FROM cases").fetchone()[0]


def merge_databases(dest: StoreHandle, src_path: str | Path) -> MergeReport:
    """Copy every source case absent from dest; collisions keep the dest row."""
    src = open_store(src_path, read_only=True)
    try:
        existing = {r[0] for r in dest.conn.execute("SELECT case_id FROM cases")}
        src_ids = [r[0] for r in src.conn.execute("SELECT case_id FROM cases ORDER BY case_id")]
        copied = skipped = 0
        with dest.conn:
            for case_id in src_ids:
                if case_id in existing:
                    skipped += 1
                    continue
                for table in CORE_TABLES:
                    row = src.conn.execute(
                        f"SELECT * FROM {table} WHERE case_id = ?", (case_id,)
                    ).fetchone()
                    if row is not None:
                        placeholders = ",".join("?" for _ in row)
                        dest.conn.execute(f"INSERT INTO {table} VALUES ({placeholders})", row)
                copied += 1
        return MergeReport(copied=copied, skipped_collisions=skipped)
    finally:
        src.close()
