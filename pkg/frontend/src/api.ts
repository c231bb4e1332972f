/** Typed client for the termnet service. Every rendered number comes from
 * these payloads; the UI never recomputes weights or scores. */

import type {
  DirectPairsPayload,
  ErrorPayload,
  GraphKind,
  NetworkPayload,
  PcaPayload,
  PostsSearchPayload,
  QueryRequest,
  QueryResponse,
  ResolutionName,
  SemimetricPairsPayload,
  TermsPayload,
  TimelinePayload,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.status = status;
    this.code = code;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base: string, fetchImpl?: FetchLike) {
    this.base = base.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, init);
    const body = await resp.json();
    if (!resp.ok) {
      const err = body as ErrorPayload;
      if (err && typeof err === "object" && "error" in err) {
        throw new ApiError(resp.status, err.error.code, err.error.message);
      }
      throw new ApiError(resp.status, "http_error", `request failed with ${resp.status}`);
    }
    return body as T;
  }

  terms(): Promise<TermsPayload> {
    return this.request("/terms");
  }

  network(resolution: ResolutionName, minWeight: number, graph: GraphKind = "direct"): Promise<NetworkPayload> {
    const suffix = graph === "closed" ? "/closed" : "";
    return this.request(`/network/${resolution}${suffix}?min_weight=${minWeight}`);
  }

  directPairs(params: {
    resolution?: ResolutionName;
    k?: number;
    classesA?: string;
    classesB?: string;
  }): Promise<DirectPairsPayload> {
    return this.request(`/pairs/direct${pairQuery(params)}`);
  }

  semimetricPairs(params: {
    resolution?: ResolutionName;
    k?: number;
    classesA?: string;
    classesB?: string;
  }): Promise<SemimetricPairsPayload> {
    return this.request(`/pairs/semimetric${pairQuery(params)}`);
  }

  pca(resolution: ResolutionName): Promise<PcaPayload> {
    return this.request(`/pca/${resolution}`);
  }

  query(body: QueryRequest): Promise<QueryResponse> {
    return this.request("/query", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  timeline(userId: string): Promise<TimelinePayload> {
    return this.request(`/users/${encodeURIComponent(userId)}/timeline`);
  }

  searchPosts(term: string, limit = 50): Promise<PostsSearchPayload> {
    return this.request(`/posts/search?term=${encodeURIComponent(term)}&limit=${limit}`);
  }
}

function pairQuery(params: {
  resolution?: ResolutionName;
  k?: number;
  classesA?: string;
  classesB?: string;
}): string {
  const parts: string[] = [];
  if (params.resolution) parts.push(`resolution=${params.resolution}`);
  if (params.k !== undefined) parts.push(`k=${params.k}`);
  if (params.classesA) parts.push(`classes_a=${encodeURIComponent(params.classesA)}`);
  if (params.classesB) parts.push(`classes_b=${encodeURIComponent(params.classesB)}`);
  return parts.length ? `?${parts.join("&")}` : "";
}
