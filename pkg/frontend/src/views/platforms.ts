// Platforms and online methods, with frequency statistics and drill-down.

import { barChart } from "../charts.js";
import { renderCaseList } from "../caselist.js";
import { el, append, clear } from "../dom.js";
import type { AppContext } from "../context.js";

export function renderPlatforms(root: HTMLElement, ctx: AppContext): void {
  const stats = ctx.data.insights.platform_stats;
  const drill = el("section", { class: "drilldown" });
  const chart = barChart(
    stats.map((s) => ({ key: s.name, label: s.name, value: s.count })),
    {
      onClick: async (datum) => {
        clear(drill);
        drill.appendChild(el("h3", {}, `Cases mentioning "${datum.label}"`));
        const result = await ctx.api.filter([{ category: "platforms", tag: datum.key }]);
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
    },
  );

  const statsList = el("ul", { class: "stat-list" });
  for (const s of stats) {
    statsList.appendChild(el("li", {}, `${s.name}: ${s.count} cases (${s.percent.toFixed(1)}%)`));
  }

  append(
    root,
    el("h2", {}, "Environment / platforms"),
    el("p", { class: "view-note" }, "Click a bar to list cases with the platform mention highlighted."),
    stats.length ? chart : el("p", { class: "empty" }, "no platform mentions extracted"),
    statsList,
    drill,
  );
}
