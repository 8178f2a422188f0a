// Case lookup by id with a structured breakdown of every feature group and
// the full narrative behind an explicit expand control, highlighted from the
// server's spans.

import { ApiError } from "../api.js";
import { button, el, append, clear } from "../dom.js";
import { renderHighlighted } from "../highlight.js";
import type { AppContext } from "../context.js";
import type { CaseDetail } from "../types.js";

function section(title: string, rows: [string, unknown][]): HTMLElement {
  const box = el("section", { class: "feature-box" });
  box.appendChild(el("h4", {}, title));
  const dl = el("dl", {});
  for (const [label, value] of rows) {
    const rendered =
      value === null || value === undefined || (Array.isArray(value) && value.length === 0)
        ? "-"
        : Array.isArray(value)
          ? value.join(", ")
          : typeof value === "object"
            ? JSON.stringify(value)
            : String(value);
    append(dl, el("dt", {}, label), el("dd", {}, rendered));
  }
  box.appendChild(dl);
  return box;
}

function renderDetail(holder: HTMLElement, detail: CaseDetail, _ctx: AppContext): void {
  clear(holder);
  const f = detail.features as Record<string, unknown>;
  append(
    holder,
    el("h3", {}, detail.case_id),
    el("p", { class: "meta" }, `${detail.month} ${detail.year} - ${detail.source_org}`),
    section("Platforms & environment", [
      ["platforms", f.platforms],
      ["investigation types", f.investigation_type],
    ]),
    section("Severity indicators", [
      ["indicators", f.severity_indicators],
      ["severity phrases", f.severity_phrases],
    ]),
    section("Case topics", [["topics", f.case_topics]]),
    section("Perpetrator information", [
      ["age", f.perpetrator_age],
      ["registered sex offender", f.registered_sex_offender],
      ["relationship to victim", f.relationship_to_victim],
    ]),
    section("Victim information", [
      ["count", f.victim_count],
      ["ages", f.victim_ages],
      ["gender", f.victim_gender],
    ]),
    section("Law enforcement", [
      ["agencies", f.agencies],
      ["prosecution", f.prosecution],
      ["charges", f.charges],
      ["jail", f.jail_info],
    ]),
    section("Evidence volume", [
      ["images", f.evidence_images],
      ["videos", f.evidence_videos],
      ["storage", f.evidence_storage],
      ["messages", f.evidence_messages],
    ]),
  );
  if (detail.priority) {
    holder.appendChild(
      section("Priority", [
        ["normalized score", detail.priority.normalized_score.toFixed(2)],
        ["band", detail.priority.band],
        ["rank", detail.priority.rank],
      ]),
    );
  }

  const narrativeHolder = el("div", { class: "narrative-holder" });
  const toggle = button("Expand narrative", () => {
    if (narrativeHolder.dataset.expanded === "yes") {
      clear(narrativeHolder);
      narrativeHolder.dataset.expanded = "no";
      toggle.textContent = "Expand narrative";
      return;
    }
    const panel = el("div", { class: "narrative" });
    panel.appendChild(renderHighlighted(detail.raw_text, detail.spans));
    narrativeHolder.appendChild(panel);
    narrativeHolder.dataset.expanded = "yes";
    toggle.textContent = "Collapse narrative";
  }, "btn expand");
  append(holder, toggle, narrativeHolder);
}

export function renderCaseDetail(root: HTMLElement, ctx: AppContext): void {
  const input = el("input", {
    type: "text",
    placeholder: "case id, e.g. AZICAC_2012_january_001",
    "aria-label": "case id",
  }) as HTMLInputElement;
  const holder = el("div", { class: "detail-holder" });

  const lookup = async (caseId: string) => {
    if (!caseId) return;
    try {
      const detail = await ctx.api.caseDetail(caseId);
      ctx.state.get().selectedCaseId === caseId || ctx.state.update({ selectedCaseId: caseId });
      renderDetail(holder, detail, ctx);
    } catch (err) {
      clear(holder);
      const message =
        err instanceof ApiError && err.notFound
          ? `no case with id "${caseId}"`
          : "lookup failed";
      holder.appendChild(el("p", { class: "inline-error" }, message));
    }
  };

  const go = button("Look up", () => void lookup(input.value.trim()));
  input.addEventListener("keydown", (event) => {
    if ((event as KeyboardEvent).key === "Enter") void lookup(input.value.trim());
  });

  append(
    root,
    el("h2", {}, "Case detail"),
    el("div", { class: "controls" }, input, go),
    holder,
  );

  const selected = ctx.state.get().selectedCaseId;
  if (selected) {
    input.value = selected;
    void lookup(selected);
  }
}
