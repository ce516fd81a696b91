/** Application shell: owns the state, runs fetch plans, updates views.
 *
 * Concurrency: in-flight fetches are keyed per endpoint with an increasing
 * token; a stale response (older token) is dropped, so the last write wins
 * per view.
 */

import { ApiClient, ApiClientError } from "./api.js";
import { buildFlagContext } from "./flags.js";
import type { Action, FetchRequest, SelectionState } from "./state.js";
import { applySelection, initialState } from "./state.js";
import type {
  CorpusMeta,
  DocumentReport,
  LayoutPayload,
  NeighborhoodReport,
  PairReport,
  RegionReport,
  SearchReport,
} from "./types.js";

export interface PayloadCache {
  meta: CorpusMeta | null;
  layout: LayoutPayload | null;
  region: RegionReport | null;
  neighbors: NeighborhoodReport | null;
  pair: PairReport | null;
  document: DocumentReport | null;
  search: SearchReport | null;
}

export interface TraceEntry {
  endpoint: FetchRequest["endpoint"];
  request: FetchRequest;
}

export class App {
  state: SelectionState = initialState;
  cache: PayloadCache = {
    meta: null,
    layout: null,
    region: null,
    neighbors: null,
    pair: null,
    document: null,
    search: null,
  };
  /** network trace, primarily for tests and debugging */
  readonly trace: TraceEntry[] = [];
  readonly actionLog: Action[] = [];
  onRender: (() => void) | null = null;
  onError: ((message: string) => void) | null = null;
  private readonly tokens = new Map<string, number>();

  constructor(private readonly api: ApiClient) {}

  async bootstrap(): Promise<void> {
    this.cache.meta = await this.api.meta();
    this.cache.layout = await this.api.layout();
    this.render();
  }

  dispatch(action: Action): void {
    const transition = applySelection(this.state, action);
    this.actionLog.push(action);
    this.state = transition.state;
    if (transition.rejected && this.onError) {
      this.onError(transition.rejected);
    }
    // selection changes invalidate payloads the new selection no longer owns
    if (!this.state.secondary) this.cache.pair = null;
    if (!this.state.primary) {
      this.cache.neighbors = null;
      this.cache.document = null;
    }
    if (!this.state.region) this.cache.region = null;
    for (const request of transition.fetches) {
      void this.run(request);
    }
    this.render();
  }

  private async run(request: FetchRequest): Promise<void> {
    const token = (this.tokens.get(request.endpoint) ?? 0) + 1;
    this.tokens.set(request.endpoint, token);
    this.trace.push({ endpoint: request.endpoint, request });
    let payload: unknown;
    try {
      payload = await this.api.run(request);
    } catch (error) {
      if (this.tokens.get(request.endpoint) === token && this.onError) {
        this.onError(error instanceof ApiClientError ? error.message : String(error));
      }
      return;
    }
    if (this.tokens.get(request.endpoint) !== token) {
      return; // a newer request superseded this one
    }
    switch (request.endpoint) {
      case "neighbors":
        this.cache.neighbors = payload as NeighborhoodReport;
        break;
      case "pair":
        this.cache.pair = payload as PairReport;
        break;
      case "document":
        this.cache.document = payload as DocumentReport;
        break;
      case "region":
        this.cache.region = payload as RegionReport;
        break;
      case "search": {
        const report = payload as SearchReport;
        this.cache.search = report;
        // completing a search shifts the previous one into the overlay slot
        this.state = applySelection(this.state, {
          type: "search-results",
          query: report.query,
          mode: report.mode as "all" | "any",
          hitIds: report.hits.map((h) => h.doc_id),
        }).state;
        this.actionLog.push({
          type: "search-results",
          query: report.query,
          mode: report.mode as "all" | "any",
          hitIds: report.hits.map((h) => h.doc_id),
        });
        break;
      }
    }
    this.render();
  }

  flagContext() {
    return buildFlagContext(this.state, this.cache.neighbors);
  }

  private render(): void {
    if (this.onRender) this.onRender();
  }
}
