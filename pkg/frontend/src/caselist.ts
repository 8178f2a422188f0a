// Drill-down case list shared by every chart and the tag panel.
//
// Overview rows show identity, tags and the matched span texts only; the
// full narrative stays off the page (and off the wire) until the analyst
// explicitly expands a row, which fetches the case detail and renders the
// text with inline highlights.

import type { ApiClient } from "./api.js";
import { button, el, append, clear } from "./dom.js";
import { renderHighlighted } from "./highlight.js";
import type { CaseSummary, Span } from "./types.js";

export interface CaseListItem {
  summary: CaseSummary;
  spans: Span[];
  defaulted?: { category: string; tag: string; justification: string }[];
}

export interface CaseListContext {
  api: ApiClient;
  openCase: (caseId: string) => void;
}

function tagChips(values: string[], className: string): HTMLElement | null {
  if (!values.length) return null;
  const wrap = el("span", { class: "chips" });
  for (const value of values) {
    append(wrap, el("span", { class: `chip ${className}` }, value));
  }
  return wrap;
}

function spanChips(spans: Span[]): HTMLElement | null {
  if (!spans.length) return null;
  const wrap = el("span", { class: "chips" });
  const seen = new Set<string>();
  for (const span of spans) {
    const key = `${span.feature_path}:${span.matched_text}`;
    if (seen.has(key)) continue;
    seen.add(key);
    const chip = el("span", { class: "chip evidence", title: span.feature_path });
    chip.appendChild(el("mark", {}, span.matched_text));
    wrap.appendChild(chip);
  }
  return wrap;
}

function expandableNarrative(item: CaseListItem, ctx: CaseListContext): HTMLElement {
  const holder = el("div", { class: "narrative-holder" });
  const toggle = button("Expand narrative", async () => {
    if (holder.dataset.expanded === "yes") {
      clear(holder);
      holder.dataset.expanded = "no";
      toggle.textContent = "Expand narrative";
      return;
    }
    try {
      const detail = await ctx.api.caseDetail(item.summary.case_id);
      const spans = item.spans.length ? item.spans : detail.spans;
      const panel = el("div", { class: "narrative" });
      panel.appendChild(renderHighlighted(detail.raw_text, spans));
      clear(holder);
      holder.appendChild(panel);
      holder.dataset.expanded = "yes";
      toggle.textContent = "Collapse narrative";
    } catch {
      clear(holder);
      holder.appendChild(el("p", { class: "inline-error" }, "could not load the narrative"));
    }
  }, "btn expand");
  const wrap = el("div", {});
  append(wrap, toggle, holder);
  return wrap;
}

export function renderCaseList(items: CaseListItem[], ctx: CaseListContext): HTMLElement {
  const list = el("div", { class: "case-list" });
  list.dataset.count = String(items.length);
  if (!items.length) {
    list.appendChild(el("p", { class: "empty" }, "no matching cases"));
    return list;
  }
  for (const item of items) {
    const row = el("article", { class: "case-row" });
    row.dataset.caseId = item.summary.case_id;

    const head = el("header", {});
    head.appendChild(
      button(item.summary.case_id, () => ctx.openCase(item.summary.case_id), "btn link case-link"),
    );
    append(
      head,
      el("span", { class: "meta" }, `${item.summary.month} ${item.summary.year}`),
      el("span", { class: "meta" }, item.summary.source_org),
    );
    row.appendChild(head);

    append(
      row,
      tagChips(item.summary.case_topics, "topic"),
      tagChips(item.summary.severity_indicators, "severity"),
      tagChips(item.summary.platforms, "platform"),
      spanChips(item.spans),
    );
    if (item.defaulted?.length) {
      for (const d of item.defaulted) {
        row.appendChild(
          el("span", { class: "chip defaulted" }, `${d.category}:${d.tag} (${d.justification})`),
        );
      }
    }
    row.appendChild(expandableNarrative(item, ctx));
    list.appendChild(row);
  }
  return list;
}
