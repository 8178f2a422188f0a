"""Static analysis reports: delimited summaries plus rendered figures.

The analyze command writes a machine-readable JSON report, CSV summaries of
clusters/triage/insights, and PNG charts into one output directory. Figures
use a muted palette; the severity chart keeps its contractual darkest-to-
lightest ordering from infant down.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .cluster import ClusterReport
from .insights import InsightReport
from .triage import BANDS, PriorityResult

# Muted default palette for bar charts.
PALETTE = ["#7b92aa", "#a3b18a", "#b08ea2", "#c9ada7", "#8d99ae", "#adb5bd"]

# Darkest to lightest, most severe first.
SEVERITY_COLORS = {
    "infant": "#5c0a0a",
    "sexual_assault": "#8b1a1a",
    "very_young": "#b03a3a",
    "under_10": "#cf6b6b",
    "production": "#e8a9a9",
}
SEVERITY_FALLBACK = "#f3d1d1"


def _bar_figure(path: Path, labels: list[str], values: list[int], title: str, colors=None) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(labels, values, color=colors or PALETTE[: len(labels)] or PALETTE[0])
    ax.set_title(title)
    ax.set_ylabel("cases")
    ax.tick_params(axis="x", rotation=30)
    for spine in ("top", "right"):
        ax.spines[spine].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(
    out_dir: str | Path,
    cluster_report: ClusterReport,
    triage_results: list[PriorityResult],
    insight_report: InsightReport,
) -> list[Path]:
    """Write report.json, the CSV summaries and the figures; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    figures = out / "figures"
    figures.mkdir(exist_ok=True)
    written = []

    report_path = out / "report.json"
    report_path.write_text(
        json.dumps(
            {
                "clusters": cluster_report.to_dict(),
                "triage": [t.to_dict() for t in triage_results],
                "insights": insight_report.to_dict(),
            },
            indent=2,
            sort_keys=True,
            ensure_ascii=False,
        ),
        encoding="utf-8",
    )
    written.append(report_path)

    clusters_csv = out / "clusters.csv"
    with open(clusters_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cluster", "cases", "coverage_percent", "avg_similarity", "subgroups"])
        for entry in cluster_report.clusters:
            writer.writerow(
                [
                    entry.name,
                    len(entry.case_ids),
                    f"{entry.coverage_percent:.1f}",
                    "" if entry.avg_similarity is None else f"{entry.avg_similarity:.3f}",
                    len(entry.subgroups),
                ]
            )
    written.append(clusters_csv)

    triage_csv = out / "triage.csv"
    with open(triage_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "case_id", "raw_score", "normalized_score", "band"])
        for result in triage_results:
            writer.writerow(
                [
                    result.rank,
                    result.case_id,
                    f"{result.raw_score:.4f}",
                    f"{result.normalized_score:.2f}",
                    result.band,
                ]
            )
    written.append(triage_csv)

    insights_csv = out / "insights.csv"
    with open(insights_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["category", "name", "count", "percent"])
        for category, stats in (
            ("platforms", insight_report.platform_stats),
            ("severity_indicators", insight_report.severity_distribution),
            ("case_topics", insight_report.topic_stats),
        ):
            for stat in stats:
                writer.writerow([category, stat.name, stat.count, f"{stat.percent:.1f}"])
    written.append(insights_csv)

    if insight_report.platform_stats:
        path = figures / "platforms.png"
        _bar_figure(
            path,
            [s.name for s in insight_report.platform_stats],
            [s.count for s in insight_report.platform_stats],
            "Platforms and online methods",
        )
        written.append(path)

    if insight_report.severity_distribution:
        severity_order = [s for s in SEVERITY_COLORS if any(
            st.name == s for st in insight_report.severity_distribution
        )]
        counts = {s.name: s.count for s in insight_report.severity_distribution}
        extras = [s.name for s in insight_report.severity_distribution if s.name not in SEVERITY_COLORS]
        labels = severity_order + extras
        path = figures / "severity.png"
        _bar_figure(
            path,
            labels,
            [counts[name] for name in labels],
            "Severity indicators (darkest = most severe)",
            colors=[SEVERITY_COLORS.get(name, SEVERITY_FALLBACK) for name in labels],
        )
        written.append(path)

    if triage_results:
        band_counts = {name: 0 for name, _, _ in BANDS}
        for result in triage_results:
            band_counts[result.band] += 1
        path = figures / "triage_bands.png"
        _bar_figure(
            path,
            list(band_counts),
            list(band_counts.values()),
            "Priority bands (normalized 5-10)",
        )
        written.append(path)

    if cluster_report.clusters:
        path = figures / "cluster_sizes.png"
        _bar_figure(
            path,
            [c.name for c in cluster_report.clusters],
            [len(c.case_ids) for c in cluster_report.clusters],
            "External cluster sizes",
        )
        written.append(path)

    return written
