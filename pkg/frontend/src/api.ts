import type {
  MembersPage,
  MetaResponse,
  NodeSearchResponse,
  SummarizeRequest,
  SummaryDocument,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

/** Thin JSON client. Staleness handling (latest-wins) lives in the state
 * layer; the client only counts requests so tests can assert that UI-side
 * actions such as label toggles stay local. */
export class ApiClient {
  requests = 0;

  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    this.requests += 1;
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = (await resp.json()) as { detail?: unknown };
        if (body.detail !== undefined) detail = String(body.detail);
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  meta(): Promise<MetaResponse> {
    return this.request<MetaResponse>('/api/meta');
  }

  searchNodes(query: string): Promise<NodeSearchResponse> {
    return this.request<NodeSearchResponse>(
      `/api/nodes?query=${encodeURIComponent(query)}`,
    );
  }

  summarize(body: SummarizeRequest): Promise<SummaryDocument> {
    return this.request<SummaryDocument>('/api/summarize', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  members(job: string, cluster: number, offset = 0, limit = 50): Promise<MembersPage> {
    return this.request<MembersPage>(
      `/api/cluster/${encodeURIComponent(job)}/${cluster}/members` +
        `?sort=indegree&offset=${offset}&limit=${limit}`,
    );
  }
}
