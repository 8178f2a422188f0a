// Chronological case view with year-range filtering. Rows are color-coded
// by severity load and click through to the case detail view.

import { el, append, button, clear } from "../dom.js";
import { severityColor, SEVERITY_ORDER, SEVERITY_LIGHTEST } from "../charts.js";
import type { AppContext } from "../context.js";
import type { CaseSummary } from "../types.js";

const MONTH_ORDER = [
  "January", "February", "March", "April", "May", "June",
  "July", "August", "September", "October", "November", "December",
];

function chronoKey(c: CaseSummary): [number, number, string] {
  return [Number(c.year) || 0, MONTH_ORDER.indexOf(c.month) + 1, c.case_id];
}

function severityDot(c: CaseSummary): HTMLElement {
  for (const name of SEVERITY_ORDER) {
    if (c.severity_indicators.includes(name)) {
      const dot = el("span", { class: "dot", title: name });
      dot.style.backgroundColor = severityColor(name);
      return dot;
    }
  }
  const dot = el("span", { class: "dot", title: "no severity indicators" });
  dot.style.backgroundColor = SEVERITY_LIGHTEST;
  return dot;
}

export function renderTimeline(root: HTMLElement, ctx: AppContext): void {
  const years = ctx.data.cases.map((c) => Number(c.year)).filter((y) => !Number.isNaN(y));
  const minYear = years.length ? Math.min(...years) : 0;
  const maxYear = years.length ? Math.max(...years) : 0;
  const range = ctx.state.get().yearRange ?? { from: minYear, to: maxYear };

  const fromInput = el("input", {
    type: "number", value: String(range.from), "aria-label": "from year",
  }) as HTMLInputElement;
  const toInput = el("input", {
    type: "number", value: String(range.to), "aria-label": "to year",
  }) as HTMLInputElement;
  const listHolder = el("div", {});

  const rerenderList = () => {
    const current = ctx.state.get().yearRange ?? { from: minYear, to: maxYear };
    const visible = ctx.data.cases
      .filter((c) => {
        const year = Number(c.year);
        return year >= current.from && year <= current.to;
      })
      .sort((a, b) => {
        const ka = chronoKey(a);
        const kb = chronoKey(b);
        return ka[0] - kb[0] || ka[1] - kb[1] || ka[2].localeCompare(kb[2]);
      });
    clear(listHolder);
    const list = el("ol", { class: "timeline-list" });
    for (const c of visible) {
      const item = el("li", { class: "timeline-row" });
      append(
        item,
        severityDot(c),
        el("span", { class: "meta" }, `${c.month} ${c.year}`),
        button(c.case_id, () => ctx.openCase(c.case_id), "btn link case-link"),
        el("span", { class: "meta" }, c.case_topics.join(", ")),
      );
      list.appendChild(item);
    }
    listHolder.appendChild(list);
    listHolder.appendChild(el("p", { class: "meta" }, `${visible.length} cases in range`));
  };

  const apply = () => {
    ctx.state.update({
      yearRange: { from: Number(fromInput.value) || minYear, to: Number(toInput.value) || maxYear },
    });
    const applied = ctx.state.get().yearRange!;
    fromInput.value = String(applied.from);
    toInput.value = String(applied.to);
    rerenderList();
  };
  fromInput.addEventListener("change", apply);
  toInput.addEventListener("change", apply);

  const controls = el("div", { class: "controls" });
  append(controls, el("label", {}, "Years ", fromInput), el("label", {}, " to ", toInput));

  append(
    root,
    el("h2", {}, "Timeline"),
    el("p", { class: "view-note" }, "Chronological case view. Dot color tracks the most severe indicator."),
    controls,
    listHolder,
  );
  rerenderList();
}
