/** Canned server payloads for a six-document corpus.
 *
 * Orders are deliberately non-alphabetical and non-monotone in score so a
 * view that re-sorted anything client-side would be caught.
 */

import type {
  CellInfo,
  CorpusMeta,
  DocumentReport,
  LayoutPayload,
  NeighborhoodReport,
  PairReport,
  RegionReport,
  SearchReport,
} from "../src/types.js";

export const meta: CorpusMeta = {
  name: "fixture",
  n_g: 6,
  vocab_size: 9,
  spaces: [
    { name: "tfidf", kind: "sparse", dim: 9 },
    { name: "emb", kind: "dense", dim: 4 },
  ],
  grid: { bins: 2 },
  defaults: { n: 10, k: 4, kappa: 1.0 },
  metrics: { term: ["g2", "uniqueness", "differential", "descriptive"], doc: ["similarity", "centrality", "occurrence", "relevance"] },
  version: "0.0-test",
};

export const layout: LayoutPayload = {
  docs: [
    { doc_id: "d0", x: 0.1, y: 0.1 },
    { doc_id: "d1", x: 0.2, y: 0.15 },
    { doc_id: "d2", x: 0.9, y: 0.8 },
    { doc_id: "d3", x: 0.85, y: 0.9 },
    { doc_id: "d4", x: 0.15, y: 0.85 },
    { doc_id: "d5", x: 0.8, y: 0.2 },
  ],
  grid: { bins: 2, x_range: [0.1, 0.9], y_range: [0.1, 0.9], counts: [[2, 1], [1, 2]] },
};

export const regionReport: RegionReport = {
  provenance: { kind: "cell", i: 0, j: 0 },
  n_r: 3,
  term_metric: "g2",
  doc_metric: "centrality",
  kappa: 1.0,
  terms: [
    { term: "zeta", score: 4.5 },
    { term: "alpha", score: 9.9 },
    { term: "mid", score: 1.1 },
  ],
  docs: [
    { doc_id: "d5", title: "Fifth doc", year: 2021, score: 2.0 },
    { doc_id: "d0", title: "Zeroth doc", year: 2019, score: 7.0 },
    { doc_id: "d1", title: "First doc", year: null, score: 1.0 },
  ],
  matrix: [
    [true, false, true],
    [false, true, true],
    [true, true, false],
  ],
};

export const neighborhoodReport: NeighborhoodReport = {
  centers: [{ doc_id: "d0", title: "Zeroth doc", year: 2019 }],
  degenerate_dual: false,
  space: "tfidf",
  alt_space: "emb",
  n: 3,
  term_metric: "g2",
  neighborhoods: [
    {
      center: { doc_id: "d0", title: "Zeroth doc", year: 2019 },
      lists: {
        tfidf: [
          { doc_id: "d4", title: "Fourth doc", year: null, distance: 0.31, in_other_list: true, in_other_selection: false },
          { doc_id: "d1", title: "First doc", year: null, distance: 0.52, in_other_list: false, in_other_selection: false },
          { doc_id: "d3", title: "Third doc", year: 2021, distance: 0.77, in_other_list: false, in_other_selection: false },
        ],
        emb: [
          { doc_id: "d4", title: "Fourth doc", year: null, distance: 0.1, in_other_list: true, in_other_selection: false },
          { doc_id: "d5", title: "Fifth doc", year: 2021, distance: 0.6, in_other_list: false, in_other_selection: false },
          { doc_id: "d2", title: "Second doc", year: 2018, distance: 0.9, in_other_list: false, in_other_selection: false },
        ],
      },
      radial: {
        center: "d0",
        entries: [
          { doc_id: "d4", radius: 0.4, angle: 0.0 },
          { doc_id: "d1", radius: 0.68, angle: 2.1 },
          { doc_id: "d3", radius: 1.0, angle: 4.2 },
        ],
      },
    },
  ],
  matrix: {
    terms: [
      { term: "beta", score: 3.3 },
      { term: "alpha", score: 8.8 },
    ],
    docs: [
      { doc_id: "d0", title: "Zeroth doc", year: 2019 },
      { doc_id: "d4", title: "Fourth doc", year: null },
      { doc_id: "d1", title: "First doc", year: null },
      { doc_id: "d3", title: "Third doc", year: 2021 },
    ],
    cells: [
      [true, true, false, false],
      [true, false, true, true],
    ],
  },
};

export const documentReport: DocumentReport = {
  doc: {
    doc_id: "d0",
    title: "Zeroth doc",
    body: "alpha beta gamma delta",
    year: 2019,
    venue: "venue-x",
    authors: ["A. Author"],
  },
  salient_terms: [
    { term: "alpha", score: 5.0 },
    { term: "gamma", score: 2.0 },
  ],
  salience_spans: [
    { start: 0, end: 5, stem: "alpha", intensity: 3 },
    { start: 11, end: 16, stem: "gamma", intensity: 1 },
  ],
  region_terms: null,
  region_spans: null,
  search_stems: ["beta"],
  search_spans: [{ start: 6, end: 10, stem: "beta" }],
};

export const pairReport: PairReport = {
  pair: {
    a: "d0",
    b: "d1",
    weights: [
      { term: "alpha", weight: 3.5 },
      { term: "beta", weight: 1.5 },
    ],
    total_weight: 5.0,
  },
  a: { ...documentReport, pair_spans: [{ start: 0, end: 5, stem: "alpha", intensity: 3 }] },
  b: {
    ...documentReport,
    doc: { ...documentReport.doc, doc_id: "d1", title: "First doc" },
    pair_spans: [{ start: 0, end: 5, stem: "alpha", intensity: 3 }],
  },
};

export const searchReport: SearchReport = {
  query: "alpha",
  mode: "any",
  sort: "relevance",
  total: 3,
  hits: [
    { doc_id: "d3", title: "Third doc", year: 2021, score: 2.4, spans: { alpha: [[0, 5]] } },
    { doc_id: "d0", title: "Zeroth doc", year: 2019, score: 9.1, spans: { alpha: [[0, 5]] } },
    { doc_id: "d5", title: "Fifth doc", year: 2021, score: 0.4, spans: { alpha: [[0, 5]] } },
  ],
};

export const cellInfo: CellInfo = {
  i: 0,
  j: 0,
  count: 2,
  terms: [
    { term: "alpha", score: 3.0 },
    { term: "zeta", score: 1.0 },
  ],
};

/** fetch stub serving the canned payloads and recording each URL. */
export function fakeFetch(log: string[]): typeof fetch {
  return async (input: URL | RequestInfo, init?: RequestInit) => {
    const url = String(input);
    log.push(`${init?.method ?? "GET"} ${url}`);
    const body = (payload: unknown) =>
      new Response(JSON.stringify(payload), {
        status: 200,
        headers: { "content-type": "application/json" },
      });
    if (url.includes("/corpus/meta")) return body(meta);
    if (url.includes("/layout")) return body(layout);
    if (url.includes("/region")) return body(regionReport);
    if (url.includes("/neighbors")) return body(neighborhoodReport);
    if (url.includes("/pair")) return body(pairReport);
    if (url.includes("/document")) return body(documentReport);
    if (url.includes("/search")) return body(searchReport);
    if (url.includes("/cell")) return body(cellInfo);
    return new Response(JSON.stringify({ error: { code: "not_found", message: url, field: null } }), {
      status: 404,
    });
  };
}
