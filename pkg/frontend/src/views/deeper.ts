// Deeper analysis: multi-select tag filtering with live counts, sub-groups
// with similarity explanations, top priority cases with scoring breakdowns,
// and the automated insight summaries.

import { renderCaseList } from "../caselist.js";
import { button, el, append, clear } from "../dom.js";
import { toggleTag } from "../state.js";
import type { AppContext } from "../context.js";
import type { TagCategory, TagSelection } from "../types.js";

function tagPanel(root: HTMLElement, ctx: AppContext): void {
  const panel = el("section", { class: "tag-panel" });
  panel.appendChild(el("h3", {}, "Tag-based filtering"));
  panel.appendChild(
    el("p", { class: "view-note" }, "Cases must match ALL selected tags. Counts update live."),
  );
  const count = el("p", { class: "filter-count" }, "select tags to filter");
  const results = el("div", { class: "drilldown" });

  const refresh = async () => {
    const selected = ctx.state.get().selectedTags;
    clear(results);
    if (!selected.length) {
      count.textContent = "select tags to filter";
      return;
    }
    const response = await ctx.api.filter(selected);
    count.textContent = `${response.total} matching cases`;
    results.appendChild(
      renderCaseList(
        response.cases.map((entry) => ({
          summary: entry.case,
          spans: entry.spans,
          defaulted: entry.defaulted_tags,
        })),
        ctx,
      ),
    );
  };

  const grid = el("div", { class: "tag-grid" });
  for (const [category, tags] of Object.entries(ctx.data.tags) as [TagCategory, string[]][]) {
    const box = el("fieldset", { class: "tag-category" });
    box.appendChild(el("legend", {}, category));
    for (const tag of tags) {
      const id = `tag-${category}-${tag}`.replace(/[^a-zA-Z0-9_-]/g, "_");
      const checkbox = el("input", { type: "checkbox", id }) as HTMLInputElement;
      const selection: TagSelection = { category, tag };
      checkbox.checked = ctx.state
        .get()
        .selectedTags.some((t) => t.category === category && t.tag === tag);
      checkbox.addEventListener("change", () => {
        ctx.state.update({ selectedTags: toggleTag(ctx.state.get().selectedTags, selection) });
        void refresh();
      });
      const label = el("label", { class: "tag-option", for: id });
      append(label, checkbox, ` ${tag}`);
      box.appendChild(label);
    }
    grid.appendChild(box);
  }
  append(panel, grid, count, results);
  root.appendChild(panel);
  if (ctx.state.get().selectedTags.length) void refresh();
}

function groupsPanel(root: HTMLElement, ctx: AppContext): void {
  const panel = el("section", {});
  panel.appendChild(el("h3", {}, "Case groups"));
  let any = false;
  for (const cluster of ctx.data.clusters.clusters) {
    for (const group of cluster.subgroups) {
      any = true;
      const card = el("article", { class: "group-card" });
      card.dataset.groupId = group.group_id;
      append(
        card,
        el("h4", {}, `${group.group_id} (${cluster.name})`),
        el("p", { class: "group-description" }, group.description),
        el(
          "p",
          { class: "meta" },
          `mean pairwise similarity ${group.mean_pairwise_similarity.toFixed(3)}`,
        ),
      );
      const members = el("p", { class: "group-members" });
      for (const caseId of group.member_case_ids) {
        members.appendChild(button(caseId, () => ctx.openCase(caseId), "btn link case-link"));
      }
      card.appendChild(members);
      const keywords = ctx.data.insights.keywords_per_group[group.group_id];
      if (keywords?.length) {
        card.appendChild(
          el(
            "p",
            { class: "meta" },
            `top keywords: ${keywords.map(([token, n]) => `${token} (${n})`).join(", ")}`,
          ),
        );
      }
      panel.appendChild(card);
    }
  }
  if (!any) panel.appendChild(el("p", { class: "empty" }, "no sub-groups at this threshold"));
  root.appendChild(panel);
}

function triagePanel(root: HTMLElement, ctx: AppContext): void {
  const panel = el("section", {});
  panel.appendChild(el("h3", {}, "Top priority cases"));
  const table = el("table", { class: "triage-table" });
  table.appendChild(
    el(
      "tr",
      {},
      el("th", {}, "rank"),
      el("th", {}, "case"),
      el("th", {}, "score"),
      el("th", {}, "band"),
      el("th", {}, "scoring breakdown"),
    ),
  );
  for (const result of ctx.data.triage.slice(0, 10)) {
    const breakdown = result.explanation
      .filter((entry) => entry.value > 0)
      .map((entry) => `${entry.factor} = ${entry.value.toFixed(2)} x ${entry.weight.toFixed(2)}`)
      .join("; ");
    const caseCell = el("td", {});
    caseCell.appendChild(button(result.case_id, () => ctx.openCase(result.case_id), "btn link case-link"));
    table.appendChild(
      el(
        "tr",
        { class: `band-${result.band.toLowerCase()}` },
        el("td", {}, String(result.rank)),
        caseCell,
        el("td", {}, result.normalized_score.toFixed(2)),
        el("td", {}, result.band),
        el("td", {}, breakdown || "no contributing factors"),
      ),
    );
  }
  panel.appendChild(table);
  root.appendChild(panel);
}

function insightsPanel(root: HTMLElement, ctx: AppContext): void {
  const panel = el("section", {});
  panel.appendChild(el("h3", {}, "Automated insights"));
  const p = ctx.data.insights.patterns;
  append(
    panel,
    el(
      "ul",
      { class: "stat-list" },
      el("li", {}, `registered sex offenders: ${p.rso_count} (${p.rso_percent.toFixed(1)}%)`),
      el("li", {}, `stranger cases: ${p.stranger_cases}, family cases: ${p.family_cases}`),
      el("li", {}, `dominant case type: ${p.dominant_case_type ?? "-"}`),
    ),
    el(
      "p",
      { class: "meta" },
      `top keywords: ${ctx.data.insights.keywords_global
        .map(([token, n]) => `${token} (${n})`)
        .join(", ")}`,
    ),
  );
  root.appendChild(panel);
}

export function renderDeeperAnalysis(root: HTMLElement, ctx: AppContext): void {
  append(root, el("h2", {}, "Deeper analysis"));
  tagPanel(root, ctx);
  groupsPanel(root, ctx);
  triagePanel(root, ctx);
  insightsPanel(root, ctx);
}
