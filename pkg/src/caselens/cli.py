"""Command-line pipeline orchestration.

Subcommands: ingest, analyze, serve, merge, audit, bench. Exit code is 0
only when no error-level event occurred; every failure prints a one-line
diagnostic to stderr.
"""

from __future__ import annotations

import argparse
import logging
import statistics
import sys
import tempfile
import time
from pathlib import Path

from . import __version__, batcher, ingest, store
from .api import ApiConfig, serve as api_serve
from .cluster import SimilarityWeights, cluster_all
from .config import load_config
from .errors import CaseLensError, FeatureValidationError, NoMarkersFound
from .extractor import RuleBook, build_case_record
from .insights import compute_insights
from .records import FeatureSet
from .report import write_report
from .store import CaseFilter, MergeReport
from .triage import BANDS, FactorTables, TriageWeights, rank_cases

logger = logging.getLogger(__name__)

COVERAGE_FIELDS = [
    ("Relationship to victim", lambda fs: bool(fs.relationship_to_victim)),
    ("Prosecution outcome", lambda fs: bool(fs.prosecution)),
    ("Case topics", lambda fs: bool(fs.case_topics)),
    ("Severity indicators", lambda fs: bool(fs.severity_indicators)),
    ("Investigation type", lambda fs: bool(fs.investigation_type)),
    ("Perpetrator demographics", lambda fs: fs.perpetrator_age is not None),
    ("Platforms used", lambda fs: bool(fs.platforms)),
    ("Victim count", lambda fs: fs.victim_count is not None),
]


def _coverage_table(feature_sets: list[FeatureSet]) -> str:
    n = len(feature_sets)
    lines = ["Feature coverage (n=%d):" % n]
    for label, present in COVERAGE_FIELDS:
        count = sum(1 for fs in feature_sets if present(fs))
        percent = 100.0 * count / n if n else 0.0
        lines.append(f"  {label:<26} {percent:5.1f}%  ({count}/{n})")
    return "\n".join(lines)


def cmd_ingest(args) -> int:
    cfg = load_config(args.config)
    rulebook = RuleBook(cfg)
    handle = store.init_schema(args.db)
    failures: list[str] = []
    stored: list[FeatureSet] = []

    for path in args.paths:
        try:
            doc = ingest.ingest_document(path, cfg.org_patterns, org=args.org, year=args.year)
        except (OSError, CaseLensError) as exc:
            failures.append(f"{path}: {exc}")
            continue
        org = doc.source_org
        if doc.report_year is None:
            failures.append(f"{path}: report year not inferable from filename; pass --year")
            continue
        year = str(doc.report_year)
        try:
            segments = batcher.batch_cases(doc.cleaned_text, org, year)
        except NoMarkersFound as exc:
            if args.whole_doc_fallback:
                segments = [batcher.whole_document_segment(doc.cleaned_text, org, year)]
            else:
                failures.append(f"{path}: {exc} (use --whole-doc-fallback to keep it as one case)")
                continue
        count = 0
        for segment in segments:
            try:
                record = build_case_record(segment, rulebook)
            except FeatureValidationError as exc:
                failures.append(f"{path}: {exc}")
                continue
            store.upsert_case(handle, record)
            stored.append(record.features)
            count += 1
        print(f"{path}: {count} cases stored")

    if stored:
        print()
        print(_coverage_table(stored))
    handle.close()
    for failure in failures:
        print(f"error: {failure}", file=sys.stderr)
    return 1 if failures else 0


def cmd_analyze(args) -> int:
    cfg = load_config(args.config)
    handle = store.open_store(args.db, read_only=True)
    records = store.query_cases(handle)
    handle.close()

    threshold = args.threshold if args.threshold is not None else cfg.similarity_threshold
    report = cluster_all(
        records,
        weights=SimilarityWeights.from_config(cfg.similarity_weights),
        threshold=threshold,
        severe_markers=cfg.severe_markers,
    )
    triage_results = rank_cases(
        records,
        w=TriageWeights.from_config(cfg.triage_weights),
        tables=FactorTables.from_config(cfg.triage_tables, len(cfg.severity_phrases)),
    )
    groups = [g for entry in report.clusters for g in entry.subgroups]
    kw = cfg.keyword_settings
    insight_report = compute_insights(
        records,
        groups,
        top_k=int(kw.get("top_k", 10)),
        min_length=int(kw.get("min_length", 4)),
        stopwords=frozenset(kw.get("stopwords", [])),
    )

    print(f"Analyzed {len(records)} cases (threshold {threshold:g})")
    print()
    print(f"{'Cluster':<16}{'Cases':>6}{'Coverage':>10}{'Avg. Sim':>10}{'Groups':>8}")
    for entry in report.clusters:
        avg = "-" if entry.avg_similarity is None else f"{entry.avg_similarity:.3f}"
        print(
            f"{entry.name:<16}{len(entry.case_ids):>6}{entry.coverage_percent:>9.1f}%"
            f"{avg:>10}{len(entry.subgroups):>8}"
        )
    for entry in report.clusters:
        for group in entry.subgroups:
            print(f"  {group.group_id}: {group.description}")

    print()
    scores = [t.normalized_score for t in triage_results]
    print("Priority triage:")
    for name, lo, hi in BANDS:
        members = [t for t in triage_results if t.band == name]
        percent = 100.0 * len(members) / len(triage_results) if triage_results else 0.0
        print(f"  {name:<8}{lo:.1f}-{hi:.1f}  {len(members):>4} ({percent:.1f}%)")
    if scores:
        mean = statistics.mean(scores)
        std = statistics.pstdev(scores)
        print(f"  range {min(scores):.2f}-{max(scores):.2f}  mean {mean:.2f}  std {std:.2f}")

    written = write_report(args.out, report, triage_results, insight_report)
    print()
    print(f"Report written to {args.out} ({len(written)} files)")
    return 0


def cmd_serve(args) -> int:
    api_serve(
        ApiConfig(
            db_path=args.db,
            bind_address=args.bind,
            static_assets_dir=args.static_dir,
            config_path=args.config,
        )
    )
    return 0


def cmd_merge(args) -> int:
    dest = store.open_store(args.dest)
    try:
        report: MergeReport = store.merge_databases(dest, args.src)
    finally:
        dest.close()
    print(f"merged {args.src} into {args.dest}: copied {report.copied}, "
          f"skipped {report.skipped_collisions} collisions")
    return 0


def cmd_audit(args) -> int:
    handle = store.open_store(args.db, read_only=True)
    records = store.query_cases(handle, CaseFilter(case_ids=[args.case]))
    handle.close()
    if not records:
        print(f"error: unknown case {args.case!r}", file=sys.stderr)
        return 1
    record = records[0]
    print(f"case {record.case_id}  org={record.source_org}  {record.month} {record.year}")
    print("-" * 72)
    print(record.raw_text)
    print("-" * 72)
    print(f"{len(record.spans)} highlight spans:")
    for span in sorted(record.spans, key=lambda s: (s.start, s.feature_path)):
        print(
            f"  [{span.start:>5}:{span.end:>5}) {span.feature_path:<36} "
            f"{span.rule_id:<32} {span.matched_text!r}"
        )
    return 0


def cmd_bench(args) -> int:
    cfg = load_config(args.config)
    rulebook = RuleBook(cfg)
    handle = store.open_store(args.db, read_only=True)
    records = store.query_cases(handle)
    handle.close()
    n = len(records)
    if n == 0:
        print("error: database has no cases to benchmark", file=sys.stderr)
        return 1

    segments = [
        batcher.CaseSegment(
            case_id=r.case_id,
            text=r.raw_text,
            month=r.month,
            year=r.year,
            source_org=r.source_org,
            sequence_number=i + 1,
        )
        for i, r in enumerate(records)
    ]

    t0 = time.perf_counter()
    rebuilt = [build_case_record(s, rulebook) for s in segments]
    t_extract = time.perf_counter() - t0

    with tempfile.TemporaryDirectory() as tmp:
        scratch = store.init_schema(Path(tmp) / "bench.db")
        t0 = time.perf_counter()
        for record in rebuilt:
            store.upsert_case(scratch, record)
        t_store = time.perf_counter() - t0
        scratch.close()

    t0 = time.perf_counter()
    cluster_all(
        rebuilt,
        weights=SimilarityWeights.from_config(cfg.similarity_weights),
        threshold=cfg.similarity_threshold,
        severe_markers=cfg.severe_markers,
    )
    t_cluster = time.perf_counter() - t0

    t0 = time.perf_counter()
    rank_cases(
        rebuilt,
        w=TriageWeights.from_config(cfg.triage_weights),
        tables=FactorTables.from_config(cfg.triage_tables, len(cfg.severity_phrases)),
    )
    t_triage = time.perf_counter() - t0

    total = t_extract + t_store + t_cluster + t_triage
    print(f"Benchmark over {n} cases:")
    print(f"  feature extraction   {1000 * t_extract:8.2f} ms  ({1000 * t_extract / n:.2f} ms/case)")
    print(f"  case storage         {1000 * t_store:8.2f} ms  ({1000 * t_store / n:.2f} ms/case)")
    print(f"  clustering           {1000 * t_cluster:8.2f} ms")
    print(f"  triage               {1000 * t_triage:8.2f} ms")
    print(f"  end-to-end throughput {n / total:.1f} cases/second")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caselens",
        description="Deterministic analysis pipeline for multi-case investigative reports",
    )
    parser.add_argument("--version", action="version", version=f"caselens {__version__}")
    parser.add_argument("--config", help="path to a config file overriding the packaged defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="ingest documents into a case database")
    p.add_argument("paths", nargs="+", help="text or PDF files")
    p.add_argument("--db", required=True)
    p.add_argument("--org", help="override the organization inferred from filenames")
    p.add_argument("--year", type=int, help="override the report year inferred from filenames")
    p.add_argument(
        "--whole-doc-fallback",
        action="store_true",
        help="treat a document with no temporal markers as a single case",
    )
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", help="cluster, triage and summarize a case database")
    p.add_argument("--db", required=True)
    p.add_argument("--threshold", type=float, help="similarity threshold (default from config)")
    p.add_argument("--out", default="caselens_report", help="report output directory")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("serve", help="start the read-only HTTP API")
    p.add_argument("--db", required=True)
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.add_argument("--static-dir", help="serve a built dashboard from this directory")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("merge", help="merge a source database into a destination")
    p.add_argument("--dest", required=True)
    p.add_argument("--src", required=True)
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("audit", help="print a case's raw text with span annotations")
    p.add_argument("--db", required=True)
    p.add_argument("--case", required=True)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("bench", help="per-stage timings over an existing database")
    p.add_argument("--db", required=True)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CaseLensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
