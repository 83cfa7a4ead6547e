/** Thin typed client for the query service; fetch is injectable for tests. */

import type {
  ApiErrorBody,
  Direction,
  EpochInfo,
  EventEntry,
  GraphResponse,
  HealthResponse,
  Measure,
  NodeRef,
  RepruneResponse,
  SearchHit,
  StatsResponse,
  TopicSummary,
  TraceResponse,
  WordCloudResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface ApiResult<T> {
  data: T;
  revision: string | null;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<ApiResult<T>> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}/api/v1${path}`, init);
    } catch (err) {
      throw new ApiError(0, "connection_lost", String(err));
    }
    const revision = response.headers.get("X-Revision");
    if (!response.ok) {
      let body: ApiErrorBody | null = null;
      try {
        body = (await response.json()) as ApiErrorBody;
      } catch {
        body = null;
      }
      throw new ApiError(
        response.status,
        body?.code ?? "bad_param",
        body?.message ?? `HTTP ${response.status}`,
      );
    }
    return { data: (await response.json()) as T, revision };
  }

  health(): Promise<ApiResult<HealthResponse>> {
    return this.request("/health");
  }

  epochs(): Promise<ApiResult<EpochInfo[]>> {
    return this.request("/epochs");
  }

  epochTopics(epoch: number): Promise<ApiResult<TopicSummary[]>> {
    return this.request(`/epochs/${epoch}/topics`);
  }

  topic(node: NodeRef): Promise<ApiResult<TopicSummary>> {
    return this.request(`/topics/${node.epoch}/${node.id}`);
  }

  wordcloud(node: NodeRef, n: number): Promise<ApiResult<WordCloudResponse>> {
    return this.request(`/topics/${node.epoch}/${node.id}/wordcloud?n=${n}`);
  }

  trace(
    node: NodeRef,
    direction: Direction,
    measure: Measure,
    depth: number,
  ): Promise<ApiResult<TraceResponse>> {
    const params = new URLSearchParams({
      direction,
      measure,
      depth: String(depth),
    });
    return this.request(`/topics/${node.epoch}/${node.id}/trace?${params}`);
  }

  graph(measure: Measure, survivingOnly = false): Promise<ApiResult<GraphResponse>> {
    const params = new URLSearchParams({ measure });
    if (survivingOnly) params.set("surviving", "true");
    return this.request(`/graph?${params}`);
  }

  events(): Promise<ApiResult<EventEntry[]>> {
    return this.request("/events");
  }

  stats(): Promise<ApiResult<StatsResponse>> {
    return this.request("/stats");
  }

  search(query: string, limit: number): Promise<ApiResult<SearchHit[]>> {
    const params = new URLSearchParams({ q: query, limit: String(limit) });
    return this.request(`/search?${params}`);
  }

  reprune(measure: Measure, zeta: number): Promise<ApiResult<RepruneResponse>> {
    return this.request("/reprune", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ measure, zeta }),
    });
  }
}
