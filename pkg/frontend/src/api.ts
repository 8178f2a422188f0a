// Typed client for the read-only analytics API. The dashboard never computes
// analytics itself; everything rendered comes from these endpoints.

import type {
  CaseDetail,
  CaseList,
  ClusterReport,
  FilterResponse,
  Health,
  Insights,
  SubGroup,
  TagMap,
  TagSelection,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }

  get notFound(): boolean {
    return this.status === 404;
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let message = `request failed with status ${response.status}`;
  try {
    const body = (await response.json()) as { message?: string };
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep the generic message
  }
  return new ApiError(response.status, message);
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  health(): Promise<Health> {
    return this.request("/api/health");
  }

  cases(params?: { org?: string; year_from?: number; year_to?: number }): Promise<CaseList> {
    const query = new URLSearchParams();
    if (params?.org) query.set("org", params.org);
    if (params?.year_from !== undefined) query.set("year_from", String(params.year_from));
    if (params?.year_to !== undefined) query.set("year_to", String(params.year_to));
    const suffix = query.toString() ? `?${query.toString()}` : "";
    return this.request(`/api/cases${suffix}`);
  }

  caseDetail(caseId: string): Promise<CaseDetail> {
    return this.request(`/api/cases/${encodeURIComponent(caseId)}`);
  }

  clusters(): Promise<ClusterReport> {
    return this.request("/api/clusters");
  }

  clusterGroups(name: string): Promise<{ cluster: string; groups: SubGroup[] }> {
    return this.request(`/api/clusters/${encodeURIComponent(name)}/groups`);
  }

  triage(): Promise<{ results: import("./types.js").PriorityResult[] }> {
    return this.request("/api/triage");
  }

  insights(): Promise<Insights> {
    return this.request("/api/insights");
  }

  tags(): Promise<TagMap> {
    return this.request("/api/tags");
  }

  filter(tags: TagSelection[]): Promise<FilterResponse> {
    return this.request("/api/filter", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ tags }),
    });
  }
}
