// Law-enforcement agencies as a horizontal bar chart. Agency involvement is
// not a filterable tag category, so the drill-down narrows the server's case
// summaries by the agency tags they already carry; highlights come from the
// case detail spans on expansion.

import { horizontalBarChart } from "../charts.js";
import { renderCaseList } from "../caselist.js";
import { el, append, clear } from "../dom.js";
import type { AppContext } from "../context.js";

export function renderOrganizations(root: HTMLElement, ctx: AppContext): void {
  const stats = ctx.data.insights.agency_stats;
  const drill = el("section", { class: "drilldown" });
  const chart = horizontalBarChart(
    stats.map((s) => ({ key: s.name, label: s.name, value: s.count })),
    {
      onClick: (datum) => {
        clear(drill);
        drill.appendChild(el("h3", {}, `Cases involving ${datum.label}`));
        const matching = ctx.data.cases.filter((c) => c.agencies.includes(datum.key));
        drill.appendChild(
          renderCaseList(
            matching.map((summary) => ({ summary, spans: [] })),
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
    el("h2", {}, "Organizations involved"),
    el("p", { class: "view-note" }, "Click a bar to list the cases naming that agency."),
    stats.length ? chart : el("p", { class: "empty" }, "no agencies extracted"),
    statsList,
    drill,
  );
}
