// Severity indicator distribution: color-coded bars, darkest for the most
// severe. Clicking a bar drills into the server-filtered case list with the
// justifying text highlighted.

import { barChart, severityColor, SEVERITY_ORDER } from "../charts.js";
import { renderCaseList } from "../caselist.js";
import { el, append, clear } from "../dom.js";
import type { AppContext } from "../context.js";
import type { ChartDatum } from "../charts.js";

export function renderSeverity(root: HTMLElement, ctx: AppContext): void {
  const stats = ctx.data.insights.severity_distribution;
  const byName = new Map(stats.map((s) => [s.name, s]));
  const ordered = [
    ...SEVERITY_ORDER.filter((name) => byName.has(name)),
    ...stats.map((s) => s.name).filter((name) => !SEVERITY_ORDER.includes(name)),
  ];
  const data: ChartDatum[] = ordered.map((name) => ({
    key: name,
    label: name,
    value: byName.get(name)!.count,
    color: severityColor(name),
  }));

  const drill = el("section", { class: "drilldown" });
  const chart = barChart(data, {
    onClick: async (datum) => {
      clear(drill);
      drill.appendChild(el("h3", {}, `Cases with severity indicator "${datum.label}"`));
      const result = await ctx.api.filter([
        { category: "severity_indicators", tag: datum.key },
      ]);
      drill.appendChild(
        renderCaseList(
          result.cases.map((entry) => ({
            summary: entry.case,
            spans: entry.spans,
            defaulted: entry.defaulted_tags,
          })),
          ctx,
        ),
      );
    },
  });

  const statsList = el("ul", { class: "stat-list" });
  for (const name of ordered) {
    const s = byName.get(name)!;
    statsList.appendChild(el("li", {}, `${name}: ${s.count} cases (${s.percent.toFixed(1)}%)`));
  }

  append(
    root,
    el("h2", {}, "Severity indicators"),
    el("p", { class: "view-note" }, "Darkest red marks the most severe indicator. Click a bar to list the matching cases with highlighted source text."),
    data.length ? chart : el("p", { class: "empty" }, "no severity indicators extracted"),
    statsList,
    drill,
  );
}
