/** Thin typed client for the ranking service.
 *
 * The fetch implementation is injectable so tests can replay canned
 * responses without a network.
 */

import type {
  BoundsReport,
  CheckReport,
  ComparisonEdit,
  EditResponse,
  PairReport,
  ReductReport,
  RelationsReport,
  SessionSummary,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{
  status: number;
  headers: { get(name: string): string | null };
  json(): Promise<unknown>;
}>;

/** Error raised for any non-2xx response, carrying the service's detail. */
export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
    this.status = status;
  }
}

async function readDetail(response: {
  json(): Promise<unknown>;
}): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (body && typeof body.detail === "string") {
      return body.detail;
    }
  } catch {
    // fall through to the generic message
  }
  return "request failed";
}

export interface AnalysisResult<T> {
  body: T;
  index: number;
}

export class ApiClient {
  private readonly fetchImpl: FetchLike;
  private readonly base: string;

  constructor(fetchImpl: FetchLike, base = "") {
    this.fetchImpl = fetchImpl;
    this.base = base.replace(/\/$/, "");
  }

  private async request(
    path: string,
    init?: { method?: string; body?: unknown },
  ): Promise<{
    status: number;
    headers: { get(name: string): string | null };
    json(): Promise<unknown>;
  }> {
    const options: {
      method?: string;
      headers?: Record<string, string>;
      body?: string;
    } = {};
    if (init?.method) {
      options.method = init.method;
    }
    if (init && "body" in init && init.body !== undefined) {
      options.headers = { "Content-Type": "application/json" };
      options.body = JSON.stringify(init.body);
    }
    const response = await this.fetchImpl(this.base + path, options);
    if (response.status < 200 || response.status >= 300) {
      throw new ApiError(response.status, await readDetail(response));
    }
    return response;
  }

  async createSession(problem: unknown): Promise<SessionSummary> {
    const response = await this.request("/sessions", {
      method: "POST",
      body: problem,
    });
    return (await response.json()) as SessionSummary;
  }

  async getSession(id: string): Promise<SessionSummary> {
    const response = await this.request(`/sessions/${id}`);
    return (await response.json()) as SessionSummary;
  }

  async editComparisons(
    id: string,
    edit: ComparisonEdit,
  ): Promise<EditResponse> {
    const response = await this.request(`/sessions/${id}/comparisons`, {
      method: "POST",
      body: edit,
    });
    return (await response.json()) as EditResponse;
  }

  private async analysis<T>(
    id: string,
    payload: Record<string, unknown>,
  ): Promise<AnalysisResult<T>> {
    const response = await this.request(`/sessions/${id}/analyses`, {
      method: "POST",
      body: payload,
    });
    const index = Number(response.headers.get("X-Analysis-Index") ?? "0");
    return { body: (await response.json()) as T, index };
  }

  check(id: string, explainAll: boolean): Promise<AnalysisResult<CheckReport>> {
    const params = explainAll ? { explain_all: true } : {};
    return this.analysis<CheckReport>(id, { kind: "check", params });
  }

  bounds(id: string): Promise<AnalysisResult<BoundsReport>> {
    return this.analysis<BoundsReport>(id, { kind: "bounds", params: {} });
  }

  relations(id: string): Promise<AnalysisResult<RelationsReport>> {
    return this.analysis<RelationsReport>(id, { kind: "relations", params: {} });
  }

  pair(
    id: string,
    first: string,
    second: string,
  ): Promise<AnalysisResult<PairReport>> {
    return this.analysis<PairReport>(id, {
      kind: "relations",
      params: { pair: [first, second] },
    });
  }

  reduct(
    id: string,
    first: string,
    second: string,
  ): Promise<AnalysisResult<ReductReport>> {
    return this.analysis<ReductReport>(id, {
      kind: "reduct",
      params: { pair: [first, second] },
    });
  }
}
