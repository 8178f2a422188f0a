"""Read-only HTTP API serving cases, clusters, triage, insights and audit data.

Analytics are computed once at startup from the database file and served
from an immutable snapshot, so every response is deterministic for a fixed
database. No endpoint mutates the store.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import __version__
from .cluster import SimilarityWeights, cluster_all
from .config import Config, load_config
from .errors import UnknownTag
from .extractor import RuleBook
from .insights import TagQuery, compute_insights, filter_by_tags, tag_vocabularies
from .records import CaseRecord
from .store import CaseFilter, open_store, query_cases
from .triage import FactorTables, TriageWeights, rank_cases


@dataclass
class ApiConfig:
    db_path: str
    bind_address: str = "127.0.0.1:8000"
    static_assets_dir: str | None = None
    config_path: str | None = None

    def host_port(self) -> tuple[str, int]:
        host, _, port = self.bind_address.rpartition(":")
        port_num = int(port)
        if not (1 <= port_num <= 65535):
            raise ValueError(f"port {port_num} outside [1, 65535]")
        return host or "127.0.0.1", port_num


class TagSelection(BaseModel):
    category: str
    tag: str


class FilterBody(BaseModel):
    tags: list[TagSelection] = Field(min_length=1)


@dataclass
class Snapshot:
    """Precomputed analytics for one database file."""

    records: list[CaseRecord]
    by_id: dict[str, CaseRecord]
    cluster_report: dict
    cluster_groups: dict[str, list[dict]]
    triage_results: list[dict]
    triage_by_case: dict[str, dict]
    insights: dict
    vocabularies: dict[str, frozenset[str]]
    tags: dict[str, list[str]]
    threshold: float = 0.35
    subgroup_count: int = 0
    extra: dict = field(default_factory=dict)


def build_snapshot(db_path: str, config: Config | None = None) -> Snapshot:
    cfg = config or load_config()
    rulebook = RuleBook(cfg)
    handle = open_store(db_path, read_only=True)
    try:
        records = query_cases(handle)
    finally:
        handle.close()

    weights = SimilarityWeights.from_config(cfg.similarity_weights)
    threshold = cfg.similarity_threshold
    report = cluster_all(
        records, weights=weights, threshold=threshold, severe_markers=cfg.severe_markers
    )
    groups = [g for entry in report.clusters for g in entry.subgroups]
    triage = rank_cases(
        records,
        w=TriageWeights.from_config(cfg.triage_weights),
        tables=FactorTables.from_config(cfg.triage_tables, len(cfg.severity_phrases)),
    )
    kw = cfg.keyword_settings
    insight_report = compute_insights(
        records,
        groups,
        top_k=int(kw.get("top_k", 10)),
        min_length=int(kw.get("min_length", 4)),
        stopwords=frozenset(kw.get("stopwords", [])),
    )
    return Snapshot(
        records=records,
        by_id={r.case_id: r for r in records},
        cluster_report=report.to_dict(),
        cluster_groups={
            entry.name: [g.to_dict() for g in entry.subgroups] for entry in report.clusters
        },
        triage_results=[t.to_dict() for t in triage],
        triage_by_case={t.case_id: t.to_dict() for t in triage},
        insights=insight_report.to_dict(),
        vocabularies=rulebook.vocabularies,
        tags=tag_vocabularies(rulebook.vocabularies),
        threshold=threshold,
        subgroup_count=len(groups),
    )


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def _case_summary(record: CaseRecord) -> dict:
    fs = record.features
    return {
        "case_id": record.case_id,
        "source_org": record.source_org,
        "year": record.year,
        "month": record.month,
        "case_topics": sorted(fs.case_topics),
        "severity_indicators": sorted(fs.severity_indicators),
        "platforms": sorted(fs.platforms),
        "agencies": sorted(fs.agencies),
        "investigation_types": sorted(fs.investigation_type or ()),
        "relationship_to_victim": fs.relationship_to_victim,
        "registered_sex_offender": fs.registered_sex_offender,
        "text_chars": len(record.raw_text),
    }


def create_app(api_config: ApiConfig) -> FastAPI:
    snapshot = build_snapshot(api_config.db_path, load_config(api_config.config_path))
    app = FastAPI(title="caselens API", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return _error(400, "bad_request", str(exc.errors()[:3]))

    @app.get("/api/health")
    def health():
        return {"version": __version__, "cases": len(snapshot.records)}

    @app.get("/api/cases")
    def cases(
        org: str | None = None, year_from: int | None = None, year_to: int | None = None
    ):
        out = []
        for record in snapshot.records:
            if org is not None and record.source_org != org:
                continue
            year = int(record.year) if record.year.isdigit() else None
            if year_from is not None and (year is None or year < year_from):
                continue
            if year_to is not None and (year is None or year > year_to):
                continue
            out.append(_case_summary(record))
        return {"cases": out, "total": len(out)}

    @app.get("/api/cases/{case_id}")
    def case_detail(case_id: str):
        record = snapshot.by_id.get(case_id)
        if record is None:
            return _error(404, "not_found", f"unknown case {case_id!r}")
        return {
            "case_id": record.case_id,
            "source_org": record.source_org,
            "year": record.year,
            "month": record.month,
            "raw_text": record.raw_text,
            "features": record.features.to_dict(),
            "spans": [s.to_dict() for s in record.spans],
            "created_at": record.created_at,
            "priority": snapshot.triage_by_case.get(record.case_id),
        }

    @app.get("/api/clusters")
    def clusters():
        return snapshot.cluster_report

    @app.get("/api/clusters/{name}/groups")
    def cluster_groups(name: str):
        groups = snapshot.cluster_groups.get(name)
        if groups is None:
            return _error(404, "not_found", f"unknown cluster {name!r}")
        return {"cluster": name, "groups": groups}

    @app.get("/api/triage")
    def triage():
        return {"results": snapshot.triage_results}

    @app.get("/api/insights")
    def insights():
        return snapshot.insights

    @app.get("/api/tags")
    def tags():
        return snapshot.tags

    @app.post("/api/filter")
    def filter_cases(body: FilterBody):
        query = TagQuery(tags=tuple((t.category, t.tag) for t in body.tags))
        try:
            hits = filter_by_tags(snapshot.records, query, snapshot.vocabularies)
        except UnknownTag as exc:
            return _error(400, "bad_request", str(exc))
        return {
            "query": [{"category": c, "tag": t} for c, t in query.tags],
            "total": len(hits),
            "cases": [
                {
                    "case": _case_summary(h.record),
                    "spans": [s.to_dict() for s in h.spans],
                    "defaulted_tags": [
                        {"category": c, "tag": t, "justification": "default, no span"}
                        for c, t in h.defaulted_tags
                    ],
                }
                for h in hits
            ],
        }

    if api_config.static_assets_dir:
        app.mount(
            "/", StaticFiles(directory=api_config.static_assets_dir, html=True), name="dashboard"
        )
    return app


def serve(api_config: ApiConfig) -> None:
    """Run the API under uvicorn (blocking)."""
    import uvicorn

    host, port = api_config.host_port()
    uvicorn.run(create_app(api_config), host=host, port=port, log_level="info")
