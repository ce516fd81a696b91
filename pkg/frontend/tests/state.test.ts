import { describe, expect, it } from "vitest";

import {
  applySelection,
  initialState,
  replay,
  type Action,
  type SelectionState,
} from "../src/state.js";

function run(actions: Action[]): SelectionState {
  let state = initialState;
  for (const action of actions) {
    state = applySelection(state, action).state;
  }
  return state;
}

describe("selection reducer", () => {
  it("select-region plans exactly one region fetch", () => {
    const { fetches } = applySelection(initialState, {
      type: "select-region",
      provenance: { kind: "cell", i: 3, j: 4 },
    });
    expect(fetches).toHaveLength(1);
    expect(fetches[0].endpoint).toBe("region");
  });

  it("select-doc plans neighbors and document fetches", () => {
    const { fetches } = applySelection(initialState, { type: "select-doc", docId: "a" });
    expect(fetches.map((f) => f.endpoint)).toEqual(["neighbors", "document"]);
  });

  it("select-second needs a primary and must differ from it", () => {
    const rejected = applySelection(initialState, { type: "select-second", docId: "a" });
    expect(rejected.rejected).toBeTruthy();
    const withPrimary = applySelection(initialState, { type: "select-doc", docId: "a" }).state;
    const same = applySelection(withPrimary, { type: "select-second", docId: "a" });
    expect(same.rejected).toMatch(/differ/);
    expect(same.state).toBe(withPrimary); // state unchanged on rejection
    const ok = applySelection(withPrimary, { type: "select-second", docId: "b" });
    expect(ok.state.secondary).toBe("b");
    expect(ok.fetches.map((f) => f.endpoint)).toEqual(["neighbors", "pair", "document"]);
  });

  it("back on empty history is a no-op", () => {
    const { state, fetches } = applySelection(initialState, { type: "back" });
    expect(state).toBe(initialState);
    expect(fetches).toEqual([]);
  });

  it("select doc then back restores the pre-selection state", () => {
    const before = initialState;
    const after = run([{ type: "select-doc", docId: "a" }, { type: "back" }]);
    expect(after.primary).toBe(before.primary);
    expect(after.secondary).toBe(before.secondary);
    expect(after.region).toBe(before.region);
  });

  it("history grows append-only", () => {
    let state = initialState;
    let lengths = [state.history.length];
    for (const action of [
      { type: "select-doc", docId: "a" } as Action,
      { type: "select-region", provenance: { kind: "cell", i: 0, j: 0 } } as Action,
      { type: "back" } as Action,
      { type: "select-doc", docId: "b" } as Action,
    ]) {
      const prior = state.history;
      state = applySelection(state, action).state;
      // previous entries are never rewritten or dropped
      expect(state.history.slice(0, prior.length)).toEqual([...prior]);
      lengths.push(state.history.length);
    }
    expect(lengths.every((n, i) => i === 0 || n >= lengths[i - 1])).toBe(true);
  });

  it("replaying an action log reproduces the final state", () => {
    const log: Action[] = [
      { type: "select-doc", docId: "a" },
      { type: "select-second", docId: "b" },
      { type: "select-region", provenance: { kind: "rectangle", x0: 0, y0: 0, x1: 1, y1: 1 } },
      { type: "search-results", query: "robots", mode: "any", hitIds: ["a", "c"] },
      { type: "toggle-favorite", docId: "c" },
      { type: "recolor-stem", stem: "robot" },
      { type: "back" },
      { type: "set-n", n: 20 },
    ];
    const first = run(log);
    const second = replay(log);
    expect(second).toEqual(first);
  });

  it("keeps exactly one step of previous-search memory", () => {
    const one = run([{ type: "search-results", query: "q1", mode: "any", hitIds: ["a"] }]);
    expect(one.search?.query).toBe("q1");
    expect(one.prevSearch).toBeNull();
    const two = run([
      { type: "search-results", query: "q1", mode: "any", hitIds: ["a"] },
      { type: "search-results", query: "q2", mode: "any", hitIds: ["b"] },
      { type: "search-results", query: "q3", mode: "any", hitIds: ["c"] },
    ]);
    expect(two.search?.query).toBe("q3");
    expect(two.prevSearch?.query).toBe("q2"); // q1 fell off: one step only
  });

  it("favorites stay duplicate-free and toggle off", () => {
    const once = run([{ type: "toggle-favorite", docId: "a" }]);
    expect(once.favorites).toEqual(["a"]);
    const twice = run([
      { type: "toggle-favorite", docId: "a" },
      { type: "toggle-favorite", docId: "a" },
    ]);
    expect(twice.favorites).toEqual([]);
  });

  it("metric changes refetch only what they affect", () => {
    const withRegion = run([
      { type: "select-region", provenance: { kind: "cell", i: 1, j: 1 } },
    ]);
    const docMetric = applySelection(withRegion, { type: "set-doc-metric", metric: "occurrence" });
    expect(docMetric.fetches.map((f) => f.endpoint)).toEqual(["region"]);
    const withBoth = run([
      { type: "select-doc", docId: "a" },
      { type: "select-region", provenance: { kind: "cell", i: 1, j: 1 } },
    ]);
    const termMetric = applySelection(withBoth, { type: "set-term-metric", metric: "differential" });
    expect(termMetric.fetches.map((f) => f.endpoint).sort()).toEqual(["neighbors", "region"]);
  });

  it("changing n refetches neighborhoods when a document is selected", () => {
    const selected = run([{ type: "select-doc", docId: "a" }]);
    const changed = applySelection(selected, { type: "set-n", n: 25 });
    expect(changed.fetches.map((f) => f.endpoint)).toEqual(["neighbors"]);
    expect(
      changed.fetches[0].endpoint === "neighbors" ? changed.fetches[0].n : 0,
    ).toBe(25);
  });

  it("actions are pure: inputs are never mutated", () => {
    const snapshot = JSON.parse(JSON.stringify(initialState));
    applySelection(initialState, { type: "select-doc", docId: "a" });
    applySelection(initialState, { type: "toggle-favorite", docId: "a" });
    expect(JSON.parse(JSON.stringify(initialState))).toEqual(snapshot);
  });
});
