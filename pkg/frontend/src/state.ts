/** Client-side selection state and its pure reducer.
 *
 * The server is stateless, so everything session-scoped lives here: the dual
 * selection, the active region, spaces, the current and previous search,
 * history, and favorites. applySelection is a pure function from
 * (state, action) to (state, fetch plan), which is what makes a recorded
 * action log replayable and the fetch traffic testable.
 */

import type { Provenance } from "./types.js";

export interface SearchSnapshot {
  query: string;
  mode: "all" | "any";
  hitIds: string[];
}

export interface SelectionCore {
  primary: string | null;
  secondary: string | null;
  region: Provenance | null;
}

export interface SelectionState {
  primary: string | null;
  secondary: string | null;
  region: Provenance | null;
  space: string;
  altSpace: string | null;
  n: number;
  termMetric: string;
  docMetric: string;
  kappa: number;
  search: SearchSnapshot | null;
  prevSearch: SearchSnapshot | null;
  /** Every selection core that was ever current; grows append-only. */
  history: readonly SelectionCore[];
  /** Index of the current core inside history (moves back on "back"). */
  cursor: number;
  favorites: readonly string[];
  recoloredStems: readonly string[];
  highlightsEnabled: boolean;
}

export const initialState: SelectionState = {
  primary: null,
  secondary: null,
  region: null,
  space: "tfidf",
  altSpace: null,
  n: 10,
  termMetric: "g2",
  docMetric: "centrality",
  kappa: 1.0,
  search: null,
  prevSearch: null,
  history: [{ primary: null, secondary: null, region: null }],
  cursor: 0,
  favorites: [],
  recoloredStems: [],
  highlightsEnabled: true,
};

export type Action =
  | { type: "select-doc"; docId: string }
  | { type: "select-second"; docId: string }
  | { type: "select-region"; provenance: Provenance }
  | { type: "clear" }
  | { type: "back" }
  | { type: "search"; query: string; mode: "all" | "any" }
  | { type: "search-results"; query: string; mode: "all" | "any"; hitIds: string[] }
  | { type: "set-space"; space: string }
  | { type: "set-alt-space"; space: string | null }
  | { type: "set-n"; n: number }
  | { type: "set-term-metric"; metric: string }
  | { type: "set-doc-metric"; metric: string }
  | { type: "set-kappa"; kappa: number }
  | { type: "toggle-favorite"; docId: string }
  | { type: "toggle-highlights" }
  | { type: "recolor-stem"; stem: string };

export type FetchRequest =
  | { endpoint: "neighbors"; doc: string; doc2: string | null; space: string; altSpace: string | null; n: number; termMetric: string }
  | { endpoint: "pair"; a: string; b: string }
  | { endpoint: "document"; id: string; region: Provenance | null; searchTerms: string | null }
  | { endpoint: "region"; provenance: Provenance; termMetric: string; docMetric: string; kappa: number }
  | { endpoint: "search"; query: string; mode: "all" | "any" };

export interface Transition {
  state: SelectionState;
  fetches: FetchRequest[];
  rejected?: string;
}

function core(state: SelectionState): SelectionCore {
  return { primary: state.primary, secondary: state.secondary, region: state.region };
}

function pushCore(state: SelectionState, next: SelectionCore): Pick<SelectionState, "history" | "cursor"> {
  const history = [...state.history, next];
  return { history, cursor: history.length - 1 };
}

function searchTerms(state: SelectionState): string | null {
  return state.search ? state.search.query : null;
}

function neighborsFetch(state: SelectionState): FetchRequest | null {
  if (!state.primary) return null;
  return {
    endpoint: "neighbors",
    doc: state.primary,
    doc2: state.secondary,
    space: state.space,
    altSpace: state.altSpace,
    n: state.n,
    termMetric: state.termMetric,
  };
}

function regionFetch(state: SelectionState): FetchRequest | null {
  if (!state.region) return null;
  return {
    endpoint: "region",
    provenance: state.region,
    termMetric: state.termMetric,
    docMetric: state.docMetric,
    kappa: state.kappa,
  };
}

function documentFetch(state: SelectionState, id: string): FetchRequest {
  return { endpoint: "document", id, region: state.region, searchTerms: searchTerms(state) };
}

/** Everything the restored selection needs after back (or a replayed core). */
function fetchesForCore(state: SelectionState): FetchRequest[] {
  const plan: FetchRequest[] = [];
  const neighbors = neighborsFetch(state);
  if (neighbors) plan.push(neighbors);
  if (state.primary && state.secondary) {
    plan.push({ endpoint: "pair", a: state.primary, b: state.secondary });
  }
  if (state.primary) plan.push(documentFetch(state, state.primary));
  const region = regionFetch(state);
  if (region) plan.push(region);
  return plan;
}

export function applySelection(state: SelectionState, action: Action): Transition {
  switch (action.type) {
    case "select-doc": {
      const next: SelectionState = {
        ...state,
        primary: action.docId,
        secondary: null,
        ...pushCore(state, { primary: action.docId, secondary: null, region: state.region }),
      };
      const plan: FetchRequest[] = [neighborsFetch(next)!, documentFetch(next, action.docId)];
      return { state: next, fetches: plan };
    }

    case "select-second": {
      if (!state.primary) {
        return { state, fetches: [], rejected: "select a primary document first" };
      }
      if (action.docId === state.primary) {
        return { state, fetches: [], rejected: "comparison document must differ from the selection" };
      }
      const next: SelectionState = {
        ...state,
        secondary: action.docId,
        ...pushCore(state, { primary: state.primary, secondary: action.docId, region: state.region }),
      };
      return {
        state: next,
        fetches: [
          neighborsFetch(next)!,
          { endpoint: "pair", a: state.primary, b: action.docId },
          documentFetch(next, action.docId),
        ],
      };
    }

    case "select-region": {
      const next: SelectionState = {
        ...state,
        region: action.provenance,
        ...pushCore(state, { primary: state.primary, secondary: state.secondary, region: action.provenance }),
      };
      return { state: next, fetches: [regionFetch(next)!] };
    }

    case "clear": {
      const next: SelectionState = {
        ...state,
        primary: null,
        secondary: null,
        region: null,
        ...pushCore(state, { primary: null, secondary: null, region: null }),
      };
      return { state: next, fetches: [] };
    }

    case "back": {
      if (state.cursor === 0) {
        return { state, fetches: [] }; // nothing to return to
      }
      const cursor = state.cursor - 1;
      const restored = state.history[cursor];
      const next: SelectionState = { ...state, ...restored, cursor };
      return { state: next, fetches: fetchesForCore(next) };
    }

    case "search":
      return {
        state,
        fetches: [{ endpoint: "search", query: action.query, mode: action.mode }],
      };

    case "search-results": {
      const snapshot: SearchSnapshot = {
        query: action.query,
        mode: action.mode,
        hitIds: action.hitIds,
      };
      // exactly one step of previous-search memory
      const next: SelectionState = { ...state, prevSearch: state.search, search: snapshot };
      return { state: next, fetches: [] };
    }

    case "set-space": {
      const altSpace = state.altSpace === action.space ? null : state.altSpace;
      const next = { ...state, space: action.space, altSpace };
      const neighbors = neighborsFetch(next);
      return { state: next, fetches: neighbors ? [neighbors] : [] };
    }

    case "set-alt-space": {
      const next = { ...state, altSpace: action.space };
      const neighbors = neighborsFetch(next);
      return { state: next, fetches: neighbors ? [neighbors] : [] };
    }

    case "set-n": {
      const next = { ...state, n: action.n };
      const neighbors = neighborsFetch(next);
      return { state: next, fetches: neighbors ? [neighbors] : [] };
    }

    case "set-term-metric": {
      const next = { ...state, termMetric: action.metric };
      const plan: FetchRequest[] = [];
      const region = regionFetch(next);
      if (region) plan.push(region);
      const neighbors = neighborsFetch(next);
      if (neighbors) plan.push(neighbors);
      return { state: next, fetches: plan };
    }

    case "set-doc-metric": {
      const next = { ...state, docMetric: action.metric };
      const region = regionFetch(next);
      return { state: next, fetches: region ? [region] : [] };
    }

    case "set-kappa": {
      const next = { ...state, kappa: action.kappa };
      const region = regionFetch(next);
      return { state: next, fetches: region ? [region] : [] };
    }

    case "toggle-favorite": {
      const favorites = state.favorites.includes(action.docId)
        ? state.favorites.filter((d) => d !== action.docId)
        : [...state.favorites, action.docId];
      return { state: { ...state, favorites }, fetches: [] };
    }

    case "toggle-highlights":
      return { state: { ...state, highlightsEnabled: !state.highlightsEnabled }, fetches: [] };

    case "recolor-stem": {
      const recoloredStems = state.recoloredStems.includes(action.stem)
        ? state.recoloredStems.filter((s) => s !== action.stem)
        : [...state.recoloredStems, action.stem];
      return { state: { ...state, recoloredStems }, fetches: [] };
    }
  }
}

/** Replay a recorded action log from the initial state. */
export function replay(actions: Action[]): SelectionState {
  let state = initialState;
  for (const action of actions) {
    state = applySelection(state, action).state;
  }
  return state;
}
