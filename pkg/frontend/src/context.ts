// Shared context handed to every view renderer.

import type { ApiClient } from "./api.js";
import type { StateContainer, ViewName } from "./state.js";
import type {
  CaseSummary,
  ClusterReport,
  Health,
  Insights,
  PriorityResult,
  TagMap,
} from "./types.js";

export interface SnapshotData {
  health: Health;
  cases: CaseSummary[];
  clusters: ClusterReport;
  triage: PriorityResult[];
  insights: Insights;
  tags: TagMap;
}

export interface AppContext {
  api: ApiClient;
  state: StateContainer;
  data: SnapshotData;
  showView(view: ViewName): void;
  openCase(caseId: string): void;
}
