// Data audit: per-case span table (offsets, feature path, rule id, matched
// text) plus the narrative with every extraction highlighted, for verifying
// what the rules did.

import { ApiError } from "../api.js";
import { button, el, append, clear } from "../dom.js";
import { renderHighlighted } from "../highlight.js";
import type { AppContext } from "../context.js";

export function renderAudit(root: HTMLElement, ctx: AppContext): void {
  const select = el("select", { "aria-label": "case to audit" }) as HTMLSelectElement;
  select.appendChild(el("option", { value: "" }, "select a case"));
  for (const c of ctx.data.cases) {
    select.appendChild(el("option", { value: c.case_id }, c.case_id));
  }
  const holder = el("div", {});

  const show = async (caseId: string) => {
    clear(holder);
    if (!caseId) return;
    try {
      const detail = await ctx.api.caseDetail(caseId);
      const table = el("table", { class: "span-table" });
      table.appendChild(
        el(
          "tr",
          {},
          el("th", {}, "offsets"),
          el("th", {}, "feature path"),
          el("th", {}, "rule id"),
          el("th", {}, "matched text"),
        ),
      );
      const sorted = [...detail.spans].sort(
        (a, b) => a.start - b.start || a.feature_path.localeCompare(b.feature_path),
      );
      for (const span of sorted) {
        const matched = el("td", {});
        matched.appendChild(el("mark", {}, span.matched_text));
        table.appendChild(
          el(
            "tr",
            {},
            el("td", {}, `[${span.start}, ${span.end})`),
            el("td", {}, span.feature_path),
            el("td", { class: "rule-id" }, span.rule_id),
            matched,
          ),
        );
      }
      holder.appendChild(el("p", { class: "meta" }, `${detail.spans.length} spans`));
      holder.appendChild(table);

      const narrativeHolder = el("div", { class: "narrative-holder" });
      const toggle = button("Expand highlighted narrative", () => {
        if (narrativeHolder.dataset.expanded === "yes") {
          clear(narrativeHolder);
          narrativeHolder.dataset.expanded = "no";
          toggle.textContent = "Expand highlighted narrative";
          return;
        }
        const panel = el("div", { class: "narrative" });
        panel.appendChild(renderHighlighted(detail.raw_text, detail.spans));
        narrativeHolder.appendChild(panel);
        narrativeHolder.dataset.expanded = "yes";
        toggle.textContent = "Collapse narrative";
      }, "btn expand");
      append(holder, toggle, narrativeHolder);
    } catch (err) {
      const message =
        err instanceof ApiError && err.notFound ? `no case with id "${caseId}"` : "lookup failed";
      holder.appendChild(el("p", { class: "inline-error" }, message));
    }
  };

  select.addEventListener("change", () => void show(select.value));

  append(
    root,
    el("h2", {}, "Data audit"),
    el("p", { class: "view-note" }, "Every extracted value, the rule that produced it, and the exact source offsets."),
    el("div", { class: "controls" }, select),
    holder,
  );

  const selected = ctx.state.get().selectedCaseId;
  if (selected && ctx.data.cases.some((c) => c.case_id === selected)) {
    select.value = selected;
    void show(selected);
  }
}
