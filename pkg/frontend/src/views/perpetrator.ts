// Registered-sex-offender status as a pie chart; slices drill into the
// filtered case list (the "false" slice is justified by absence, so those
// rows carry a default marker instead of spans).

import { pieChart } from "../charts.js";
import { renderCaseList } from "../caselist.js";
import { el, append, clear } from "../dom.js";
import type { AppContext } from "../context.js";

export function renderPerpetratorStatus(root: HTMLElement, ctx: AppContext): void {
  const { rso_count, rso_percent } = ctx.data.insights.patterns;
  const total = ctx.data.insights.total_cases;
  const data = [
    { key: "true", label: "registered", value: rso_count, color: "#7a1614" },
    { key: "false", label: "not registered", value: total - rso_count, color: "#c9ada7" },
  ];

  const drill = el("section", { class: "drilldown" });
  const chart = pieChart(data, {
    onClick: async (datum) => {
      clear(drill);
      drill.appendChild(
        el("h3", {}, datum.key === "true" ? "Registered sex offenders" : "No registration on record"),
      );
      const result = await ctx.api.filter([{ category: "rso", tag: datum.key }]);
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

  append(
    root,
    el("h2", {}, "Previous perpetrator status"),
    el("p", { class: "view-note" }, "Click a slice to list the cases with perpetrator status highlighted."),
    total ? chart : el("p", { class: "empty" }, "no cases"),
    el(
      "ul",
      { class: "stat-list" },
      el("li", {}, `registered: ${rso_count} cases (${rso_percent.toFixed(1)}%)`),
      el("li", {}, `not registered: ${total - rso_count} cases`),
    ),
    drill,
  );
}
