/** Thin typed client over the HTTP JSON API; the UI's only data source. */

import type {
  ApiError,
  CellInfo,
  CorpusMeta,
  DocumentReport,
  LayoutPayload,
  NeighborhoodReport,
  PairReport,
  Provenance,
  RegionReport,
  SearchReport,
} from "./types.js";
import type { FetchRequest } from "./state.js";

export class ApiClientError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly field: string | null,
  ) {
    super(message);
  }
}

function provenanceParam(provenance: Provenance): string {
  switch (provenance.kind) {
    case "cell":
      return `cell:${provenance.i},${provenance.j}`;
    case "rectangle":
      return `rect:${provenance.x0},${provenance.y0},${provenance.x1},${provenance.y1}`;
    case "ids":
      return `ids:${provenance.doc_ids.join("|")}`;
  }
}

export class ApiClient {
  constructor(
    readonly base: string = "",
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, init);
    if (!response.ok) {
      let payload: ApiError | null = null;
      try {
        payload = (await response.json()) as ApiError;
      } catch {
        // non-JSON error body; fall through to generic message
      }
      const error = payload?.error;
      throw new ApiClientError(
        response.status,
        error?.code ?? "http_error",
        error?.message ?? `request failed with status ${response.status}`,
        error?.field ?? null,
      );
    }
    return (await response.json()) as T;
  }

  meta(): Promise<CorpusMeta> {
    return this.request("/corpus/meta");
  }

  layout(): Promise<LayoutPayload> {
    return this.request("/layout");
  }

  cell(i: number, j: number): Promise<CellInfo> {
    return this.request(`/cell?i=${i}&j=${j}`);
  }

  search(query: string, mode: string, n = 200): Promise<SearchReport> {
    const params = new URLSearchParams({ q: query, mode, n: String(n) });
    return this.request(`/search?${params}`);
  }

  region(
    provenance: Provenance,
    termMetric: string,
    docMetric: string,
    kappa: number,
  ): Promise<RegionReport> {
    return this.request("/region", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        provenance,
        term_metric: termMetric,
        doc_metric: docMetric,
        kappa,
      }),
    });
  }

  neighbors(
    doc: string,
    doc2: string | null,
    space: string,
    altSpace: string | null,
    n: number,
    termMetric: string,
  ): Promise<NeighborhoodReport> {
    const params = new URLSearchParams({ doc, space, n: String(n), term_metric: termMetric });
    if (doc2) params.set("doc2", doc2);
    if (altSpace) params.set("alt_space", altSpace);
    return this.request(`/neighbors?${params}`);
  }

  pair(a: string, b: string): Promise<PairReport> {
    const params = new URLSearchParams({ a, b });
    return this.request(`/pair?${params}`);
  }

  document(
    id: string,
    region: Provenance | null,
    searchTerms: string | null,
  ): Promise<DocumentReport> {
    const params = new URLSearchParams({ id });
    if (region) params.set("region", provenanceParam(region));
    if (searchTerms) params.set("search_terms", searchTerms);
    return this.request(`/document?${params}`);
  }

  /** Dispatch one entry of a reducer fetch plan. */
  run(request: FetchRequest): Promise<unknown> {
    switch (request.endpoint) {
      case "neighbors":
        return this.neighbors(
          request.doc,
          request.doc2,
          request.space,
          request.altSpace,
          request.n,
          request.termMetric,
        );
      case "pair":
        return this.pair(request.a, request.b);
      case "document":
        return this.document(request.id, request.region, request.searchTerms);
      case "region":
        return this.region(request.provenance, request.termMetric, request.docMetric, request.kappa);
      case "search":
        return this.search(request.query, request.mode);
    }
  }
}
