#!/usr/bin/env python3
"""Capture API responses over the synthetic 47-case database into JSON
fixtures for the dashboard tests. Regenerate after API changes:

    python3 scripts/make_fixtures.py
"""

import json
import sys
import tempfile
from pathlib import Path

FRONTEND = Path(__file__).resolve().parent.parent
REPO = FRONTEND.parent
sys.path.insert(0, str(REPO / "tests"))

from fastapi.testclient import TestClient

from caselens import store
from caselens.api import ApiConfig, create_app
from caselens.batcher import batch_cases
from caselens.extractor import build_case_record
from synth import make_corpus

OUT = FRONTEND / "tests" / "fixtures"

FILTER_QUERIES = [
    [{"category": "severity_indicators", "tag": "infant"}],
    [{"category": "rso", "tag": "true"}],
    [{"category": "rso", "tag": "false"}],
    [{"category": "case_topics", "tag": "possession"}],
    [{"category": "platforms", "tag": "online"}],
    [
        {"category": "case_topics", "tag": "possession"},
        {"category": "platforms", "tag": "facebook"},
    ],
]


def filter_key(tags) -> str:
    return "+".join(sorted(f"{t['category']}:{t['tag']}" for t in tags))


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    corpus = make_corpus(47, seed=7)
    with tempfile.TemporaryDirectory() as tmp:
        db = Path(tmp) / "fixture.db"
        handle = store.init_schema(db)
        for segment in batch_cases(corpus.document, corpus.org, corpus.year):
            store.upsert_case(handle, build_case_record(segment, created_at="fixture"))
        handle.close()

        client = TestClient(create_app(ApiConfig(db_path=str(db))))
        dump = lambda name, payload: (OUT / name).write_text(
            json.dumps(payload, indent=1, sort_keys=True), encoding="utf-8"
        )
        dump("health.json", client.get("/api/health").json())
        cases = client.get("/api/cases").json()
        dump("cases.json", cases)
        dump("clusters.json", client.get("/api/clusters").json())
        dump("triage.json", client.get("/api/triage").json())
        dump("insights.json", client.get("/api/insights").json())
        dump("tags.json", client.get("/api/tags").json())
        details = {
            c["case_id"]: client.get(f"/api/cases/{c['case_id']}").json()
            for c in cases["cases"]
        }
        dump("details.json", details)
        filters = {
            filter_key(tags): client.post("/api/filter", json={"tags": tags}).json()
            for tags in FILTER_QUERIES
        }
        dump("filters.json", filters)
    print(f"fixtures written to {OUT}")


if __name__ == "__main__":
    main()
