// Application shell: loads the full analytics snapshot up front, renders the
// navigation and the active view, and shows a blocking banner if the API is
// unreachable (no partial rendering of stale data).

import { ApiClient } from "./api.js";
import { button, el, append, clear } from "./dom.js";
import { StateContainer, VIEW_NAMES, type ViewName } from "./state.js";
import type { AppContext, SnapshotData } from "./context.js";
import { renderTimeline } from "./views/timeline.js";
import { renderSeverity } from "./views/severity.js";
import { renderCaseDetail } from "./views/caseDetail.js";
import { renderPerpetratorStatus } from "./views/perpetrator.js";
import { renderPlatforms } from "./views/platforms.js";
import { renderOrganizations } from "./views/organizations.js";
import { renderDeeperAnalysis } from "./views/deeper.js";
import { renderAudit } from "./views/audit.js";

const VIEW_LABELS: Record<ViewName, string> = {
  timeline: "Timeline",
  severity: "Severity",
  case_detail: "Case detail",
  perpetrator_status: "Perpetrator status",
  platforms: "Platforms",
  organizations: "Organizations",
  deeper_analysis: "Deeper analysis",
  audit: "Audit",
};

const VIEW_RENDERERS: Record<ViewName, (root: HTMLElement, ctx: AppContext) => void> = {
  timeline: renderTimeline,
  severity: renderSeverity,
  case_detail: renderCaseDetail,
  perpetrator_status: renderPerpetratorStatus,
  platforms: renderPlatforms,
  organizations: renderOrganizations,
  deeper_analysis: renderDeeperAnalysis,
  audit: renderAudit,
};

async function loadSnapshot(api: ApiClient): Promise<SnapshotData> {
  const [health, cases, clusters, triage, insights, tags] = await Promise.all([
    api.health(),
    api.cases(),
    api.clusters(),
    api.triage(),
    api.insights(),
    api.tags(),
  ]);
  return { health, cases: cases.cases, clusters, triage: triage.results, insights, tags };
}

export async function renderViews(baseUrl: string, root: HTMLElement): Promise<AppContext | null> {
  const api = new ApiClient(baseUrl);
  clear(root);

  let data: SnapshotData;
  try {
    data = await loadSnapshot(api);
  } catch {
    const banner = el("div", { class: "error-banner", role: "alert" });
    append(
      banner,
      el("h2", {}, "API unreachable"),
      el("p", {}, "The analysis service did not respond. Start it with: caselens serve --db <file>"),
    );
    root.appendChild(banner);
    return null;
  }

  const state = new StateContainer();
  const main = el("main", { class: "view" });
  const nav = el("nav", { class: "topnav" });

  const ctx: AppContext = {
    api,
    state,
    data,
    showView: (view) => state.update({ activeView: view }),
    openCase: (caseId) => state.update({ selectedCaseId: caseId, activeView: "case_detail" }),
  };

  const navButtons = new Map<ViewName, HTMLButtonElement>();
  for (const view of VIEW_NAMES) {
    const b = button(VIEW_LABELS[view], () => ctx.showView(view), "btn nav-btn");
    b.dataset.navView = view;
    navButtons.set(view, b);
    nav.appendChild(b);
  }

  const renderActive = () => {
    const active = state.get().activeView;
    for (const [view, b] of navButtons) {
      b.classList.toggle("active", view === active);
    }
    clear(main);
    const host = el("section", { class: `view-root view-${active}` });
    host.dataset.view = active;
    VIEW_RENDERERS[active](host, ctx);
    main.appendChild(host);
  };

  state.subscribe(renderActive);

  const header = el("header", { class: "masthead" });
  append(
    header,
    el("h1", {}, "caselens"),
    el("p", { class: "meta" }, `${data.health.cases} cases - read-only analysis view`),
  );
  append(root, header, nav, main);
  renderActive();
  return ctx;
}
