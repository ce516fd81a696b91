/** Server payload shapes, mirrored one-to-one from the HTTP API. */

export interface CorpusMeta {
  name: string;
  n_g: number;
  vocab_size: number;
  spaces: { name: string; kind: string; dim: number }[];
  grid: { bins: number };
  defaults: { n: number; k: number; kappa: number };
  metrics: { term: string[]; doc: string[] };
  version: string;
}

export interface DocSummary {
  doc_id: string;
  title: string;
  year: number | null;
}

export interface TermScore {
  term: string;
  score: number;
}

export type Provenance =
  | { kind: "rectangle"; x0: number; y0: number; x1: number; y1: number }
  | { kind: "cell"; i: number; j: number }
  | { kind: "ids"; doc_ids: string[] };

export interface RegionReport {
  provenance: Provenance;
  n_r: number;
  term_metric: string;
  doc_metric: string;
  kappa: number;
  terms: TermScore[];
  docs: (DocSummary & { score: number })[];
  matrix: boolean[][];
}

export interface NeighborEntry extends DocSummary {
  distance: number;
  in_other_list: boolean;
  in_other_selection: boolean;
}

export interface RadialEntry {
  doc_id: string;
  radius: number;
  angle: number;
}

export interface NeighborhoodReport {
  centers: DocSummary[];
  degenerate_dual: boolean;
  space: string;
  alt_space: string | null;
  n: number;
  term_metric: string;
  neighborhoods: {
    center: DocSummary;
    lists: Record<string, NeighborEntry[]>;
    radial: { center: string; entries: RadialEntry[] } | null;
  }[];
  matrix: { terms: TermScore[]; docs: DocSummary[]; cells: boolean[][] };
}

export interface Span {
  start: number;
  end: number;
  stem: string;
  intensity?: number;
}

export interface DocumentReport {
  doc: {
    doc_id: string;
    title: string;
    body: string;
    year: number | null;
    venue: string | null;
    authors: string[] | null;
  };
  salient_terms: TermScore[];
  salience_spans: Span[];
  region_terms: TermScore[] | null;
  region_spans: Span[] | null;
  search_stems: string[] | null;
  search_spans: Span[] | null;
  pair_spans?: Span[];
}

export interface PairReport {
  pair: {
    a: string;
    b: string;
    weights: { term: string; weight: number }[];
    total_weight: number;
  };
  a: DocumentReport;
  b: DocumentReport;
}

export interface SearchHitPayload extends DocSummary {
  score: number;
  spans: Record<string, [number, number][]>;
}

export interface SearchReport {
  query: string;
  mode: string;
  sort: string;
  total: number;
  hits: SearchHitPayload[];
}

export interface CellInfo {
  i: number;
  j: number;
  count: number;
  terms: TermScore[];
}

export interface LayoutPayload {
  docs: { doc_id: string; x: number; y: number }[];
  grid: {
    bins: number;
    x_range: [number, number];
    y_range: [number, number];
    counts: number[][];
  };
}

export interface ApiError {
  error: { code: string; message: string; field: string | null };
}
