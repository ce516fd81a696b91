/** Derive per-document color flags from client state + fetched payloads.
 *
 * Only membership tests happen here; every ranking and distance shown in the
 * UI comes verbatim from a server payload.
 */

import type { PointFlags } from "./colors.js";
import type { NeighborhoodReport } from "./types.js";
import type { SelectionState } from "./state.js";

export interface FlagContext {
  state: SelectionState;
  neighbors1: ReadonlySet<string>;
  neighbors2: ReadonlySet<string>;
  hits: ReadonlySet<string>;
  prevHits: ReadonlySet<string>;
}

export function buildFlagContext(
  state: SelectionState,
  neighborhood: NeighborhoodReport | null,
): FlagContext {
  const neighbors1 = new Set<string>();
  const neighbors2 = new Set<string>();
  if (neighborhood) {
    for (const hood of neighborhood.neighborhoods) {
      const target = hood.center.doc_id === state.primary ? neighbors1 : neighbors2;
      for (const entries of Object.values(hood.lists)) {
        for (const entry of entries) target.add(entry.doc_id);
      }
    }
  }
  return {
    state,
    neighbors1,
    neighbors2,
    hits: new Set(state.search?.hitIds ?? []),
    prevHits: new Set(state.prevSearch?.hitIds ?? []),
  };
}

export function flagsFor(context: FlagContext, docId: string): PointFlags {
  return {
    selected1: context.state.primary === docId,
    selected2: context.state.secondary === docId,
    nbr1: context.neighbors1.has(docId),
    nbr2: context.neighbors2.has(docId),
    hit: context.hits.has(docId),
    prevHit: context.prevHits.has(docId),
  };
}
