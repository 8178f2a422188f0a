import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { installMockFetch, fixtures, type RecordedCall } from "./mockApi.js";

describe("ApiClient", () => {
  let calls: RecordedCall[];
  const api = new ApiClient("");

  beforeEach(() => {
    calls = installMockFetch();
  });

  it("fetches health", async () => {
    const health = await api.health();
    expect(health.cases).toBe(fixtures.health.cases);
    expect(calls[0].url).toBe("/api/health");
  });

  it("encodes case list query parameters", async () => {
    await api.cases({ org: "AZICAC", year_from: 2011, year_to: 2014 });
    expect(calls[0].url).toBe("/api/cases?org=AZICAC&year_from=2011&year_to=2014");
  });

  it("round-trips a case detail", async () => {
    const first = fixtures.cases.cases[0].case_id;
    const detail = await api.caseDetail(first);
    expect(detail.case_id).toBe(first);
    expect(detail.raw_text.length).toBeGreaterThan(0);
  });

  it("maps 404 to ApiError with notFound", async () => {
    await expect(api.caseDetail("GHOST")).rejects.toSatisfy(
      (err: unknown) => err instanceof ApiError && err.notFound,
    );
  });

  it("posts filter queries as JSON", async () => {
    const response = await api.filter([{ category: "rso", tag: "true" }]);
    expect(response.total).toBe(fixtures.filters["rso:true"].total);
    expect(calls[0].method).toBe("POST");
    expect(calls[0].body).toEqual({ tags: [{ category: "rso", tag: "true" }] });
  });

  it("surfaces machine-readable error messages", async () => {
    await expect(api.filter([{ category: "platforms", tag: "nope" } as any])).rejects.toSatisfy(
      (err: unknown) => err instanceof ApiError && err.status === 400,
    );
  });
});
