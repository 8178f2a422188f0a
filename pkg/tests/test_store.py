from __future__ import annotations

import json
import sqlite3

import pytest

from caselens.errors import SchemaVersionMismatch, StorageError
from caselens.records import CaseRecord, FeatureSet
from caselens.store import (
    CORE_TABLES,
    CaseFilter,
    case_count,
    init_schema,
    merge_databases,
    open_store,
    query_cases,
    upsert_case,
)


def _record(case_id="ORG_2012_january_001", year="2012", month="January", org="ORG", **features):
    return CaseRecord(
        case_id=case_id,
        source_org=org,
        year=year,
        month=month,
        raw_text=f"raw narrative for {case_id}",
        features=FeatureSet(**features),
        spans=[],
        created_at="2024-01-01T00:00:00+00:00",
    )


def test_init_creates_core_tables_empty(tmp_path):
    handle = init_schema(tmp_path / "fresh.db")
    names = {
        row[0]
        for row in handle.conn.execute("SELECT name FROM sqlite_master WHERE type='table'")
    }
    assert set(CORE_TABLES) <= names
    for table in CORE_TABLES:
        assert handle.conn.execute(f"SELECT COUNT(*) FROM {table}").fetchone()[0] == 0
    handle.close()


def test_init_idempotent(tmp_path):
    path = tmp_path / "db.db"
    handle = init_schema(path)
    upsert_case(handle, _record())
    handle.close()
    again = init_schema(path)
    assert case_count(again) == 1
    again.close()


def test_init_rejects_version_mismatch(tmp_path):
    path = tmp_path / "old.db"
    handle = init_schema(path)
    handle.conn.execute("UPDATE meta SET value = '0' WHERE key = 'schema_version'")
    handle.conn.commit()
    handle.close()
    with pytest.raises(SchemaVersionMismatch):
        init_schema(path)


def test_init_rejects_foreign_database(tmp_path):
    path = tmp_path / "foreign.db"
    conn = sqlite3.connect(path)
    conn.execute("CREATE TABLE unrelated (x)")
    conn.commit()
    conn.close()
    with pytest.raises(SchemaVersionMismatch):
        init_schema(path)


def test_round_trip_raw_text_byte_identical(tmp_path):
    handle = init_schema(tmp_path / "db.db")
    record = _record()
    record.raw_text = "exact é bytes\nwith newline"
    upsert_case(handle, record)
    (fetched,) = query_cases(handle)
    assert fetched.raw_text == record.raw_text
    assert fetched.features.to_json() == record.features.to_json()
    handle.close()


def test_upsert_replaces_and_keeps_created_at(tmp_path):
    handle = init_schema(tmp_path / "db.db")
    upsert_case(handle, _record(victim_count=1))
    changed = _record(victim_count=4)
    changed.created_at = "2030-12-31T00:00:00+00:00"
    upsert_case(handle, changed)
    assert case_count(handle) == 1
    (fetched,) = query_cases(handle)
    assert fetched.features.victim_count == 4
    assert fetched.created_at == "2024-01-01T00:00:00+00:00"
    handle.close()


def test_normalized_tables_agree_with_features(tmp_path):
    handle = init_schema(tmp_path / "db.db")
    record = _record(
        victim_count=2,
        victim_ages={7, 9},
        victim_gender="female",
        perpetrator_age=40,
        registered_sex_offender=True,
        relationship_to_victim="father",
        prosecution={"arrested", "charged"},
        charges=["exploitation"],
        jail_info="10 years in prison",
        case_topics={"family"},
    )
    upsert_case(handle, record)
    vc, ages, gender = handle.conn.execute(
        "SELECT victim_count, victim_ages, victim_gender FROM victim_demographics"
    ).fetchone()
    assert (vc, json.loads(ages), gender) == (2, [7, 9], "female")
    age, rso, rel = handle.conn.execute(
        "SELECT perpetrator_age, registered_sex_offender, relationship_to_victim"
        " FROM perpetrator_demographics"
    ).fetchone()
    assert (age, rso, rel) == (40, 1, "father")
    charges, booking, jail = handle.conn.execute(
        "SELECT charges, booking_status, jail_info FROM prosecution_outcomes"
    ).fetchone()
    assert json.loads(charges) == ["exploitation"]
    assert json.loads(booking) == ["arrested", "charged"]
    assert jail == "10 years in prison"
    handle.close()


def test_failed_upsert_leaves_no_trace(tmp_path):
    handle = init_schema(tmp_path / "db.db")
    bad = _record()
    bad.raw_text = ""  # violates the raw_text CHECK constraint
    with pytest.raises(StorageError):
        upsert_case(handle, bad)
    assert case_count(handle) == 0
    for table in CORE_TABLES:
        assert handle.conn.execute(f"SELECT COUNT(*) FROM {table}").fetchone()[0] == 0
    handle.close()


def test_query_filters(tmp_path):
    handle = init_schema(tmp_path / "db.db")
    upsert_case(handle, _record("A_2011_march_001", year="2011", month="March", org="A"))
    upsert_case(handle, _record("A_2012_january_001", year="2012", month="January", org="A"))
    upsert_case(handle, _record("B_2014_june_001", year="2014", month="June", org="B"))

    assert len(query_cases(handle)) == 3
    assert [r.case_id for r in query_cases(handle, CaseFilter(org="A"))] == [
        "A_2011_march_001",
        "A_2012_january_001",
    ]
    assert len(query_cases(handle, CaseFilter(year_from=2011, year_to=2012))) == 2
    assert [r.case_id for r in query_cases(handle, CaseFilter(month="June"))] == ["B_2014_june_001"]
    assert query_cases(handle, CaseFilter(org="NOPE")) == []
    assert [r.case_id for r in query_cases(handle, CaseFilter(case_ids=["B_2014_june_001"]))] == [
        "B_2014_june_001"
    ]
    handle.close()


def test_query_orders_by_year_month_id(tmp_path):
    handle = init_schema(tmp_path / "db.db")
    upsert_case(handle, _record("ORG_2012_march_002", year="2012", month="March"))
    upsert_case(handle, _record("ORG_2012_january_005", year="2012", month="January"))
    upsert_case(handle, _record("ORG_2011_december_001", year="2011", month="December"))
    ids = [r.case_id for r in query_cases(handle)]
    assert ids == ["ORG_2011_december_001", "ORG_2012_january_005", "ORG_2012_march_002"]
    handle.close()


def test_merge_disjoint(tmp_path):
    a = init_schema(tmp_path / "a.db")
    for i in range(3):
        upsert_case(a, _record(f"A_2012_january_{i:03d}"))
    b = init_schema(tmp_path / "b.db")
    for i in range(4):
        upsert_case(b, _record(f"B_2013_june_{i:03d}", year="2013", month="June", org="B"))
    b.close()

    report = merge_databases(a, tmp_path / "b.db")
    assert (report.copied, report.skipped_collisions) == (4, 0)
    assert case_count(a) == 7
    a.close()


def test_merge_into_itself_total_collision(tmp_path):
    path = tmp_path / "self.db"
    handle = init_schema(path)
    for i in range(5):
        upsert_case(handle, _record(f"ORG_2012_january_{i:03d}"))
    report = merge_databases(handle, path)
    assert (report.copied, report.skipped_collisions) == (0, 5)
    assert case_count(handle) == 5
    handle.close()


def test_merge_preserves_records_field_by_field(tmp_path, records47):
    src_path = tmp_path / "src.db"
    src = init_schema(src_path)
    for record in records47[:10]:
        upsert_case(src, record)
    originals = query_cases(src)
    src.close()

    dest = init_schema(tmp_path / "dest.db")
    merge_databases(dest, src_path)
    merged = query_cases(dest)
    assert len(merged) == len(originals)
    for a, b in zip(originals, merged):
        assert a.case_id == b.case_id
        assert a.raw_text == b.raw_text
        assert a.features.to_json() == b.features.to_json()
        assert a.spans_json() == b.spans_json()
        assert a.created_at == b.created_at
    dest.close()


def test_merge_rejects_version_mismatch(tmp_path):
    dest = init_schema(tmp_path / "dest.db")
    other = init_schema(tmp_path / "other.db")
    other.conn.execute("UPDATE meta SET value = '99' WHERE key = 'schema_version'")
    other.conn.commit()
    other.close()
    with pytest.raises(SchemaVersionMismatch):
        merge_databases(dest, tmp_path / "other.db")
    dest.close()


def test_read_only_handle_rejects_writes(tmp_path, db47):
    handle = open_store(db47, read_only=True)
    with pytest.raises(sqlite3.OperationalError):
        handle.conn.execute("DELETE FROM cases")
    handle.close()
