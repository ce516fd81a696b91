/** A scripted session against a recorded server: every displayed ranking must
 * come verbatim from a payload, the network trace must match the coordination
 * table, and replaying the action log must reproduce the final state. */

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { replay } from "../src/state.js";
import { NeighborListsView, NeighborhoodMatrixView } from "../src/views/neighborViews.js";
import { RegionListView, RegionMatrixView } from "../src/views/regionViews.js";
import { SearchPanelView } from "../src/views/searchPanel.js";
import { DocumentViewPanel } from "../src/views/documentView.js";
import * as fixtures from "./fixtures.js";

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

function texts(root: HTMLElement, selector: string): string[] {
  return [...root.querySelectorAll(selector)].map((node) => node.textContent ?? "");
}

describe("scripted session purity", () => {
  let app: App;
  let log: string[];

  beforeEach(async () => {
    log = [];
    app = new App(new ApiClient("http://server", fixtures.fakeFetch(log)));
    await app.bootstrap();
  });

  it("network trace follows the coordination table", async () => {
    app.dispatch({ type: "select-region", provenance: { kind: "cell", i: 0, j: 0 } });
    await flush();
    expect(app.trace.map((t) => t.endpoint)).toEqual(["region"]);

    app.dispatch({ type: "select-doc", docId: "d0" });
    await flush();
    expect(app.trace.map((t) => t.endpoint)).toEqual(["region", "neighbors", "document"]);

    app.dispatch({ type: "select-second", docId: "d1" });
    await flush();
    expect(app.trace.map((t) => t.endpoint)).toEqual([
      "region",
      "neighbors",
      "document",
      "neighbors",
      "pair",
      "document",
    ]);
    // every request went over the wire; nothing was computed locally
    expect(log.filter((entry) => entry.includes("/region"))).toHaveLength(1);
    expect(log.filter((entry) => entry.includes("/neighbors"))).toHaveLength(2);
  });

  it("region list and matrix render payload order verbatim", async () => {
    app.dispatch({ type: "select-region", provenance: { kind: "cell", i: 0, j: 0 } });
    await flush();

    const listRoot = document.createElement("div");
    new RegionListView(listRoot, () => {}).update(app.cache.region, app.state, app.flagContext());
    const listTitles = texts(listRoot, ".doc-label");
    // fixture order is score-shuffled; display must preserve it exactly
    expect(listTitles).toEqual(["Fifth doc", "Zeroth doc", "First doc"]);

    const matrixRoot = document.createElement("div");
    new RegionMatrixView(matrixRoot, () => {}, fixtures.meta.metrics.term, fixtures.meta.metrics.doc).update(
      app.cache.region,
      app.state,
      app.flagContext(),
    );
    expect(texts(matrixRoot, ".term-row")).toEqual(["zeta", "alpha", "mid"]);
    const cells = [...matrixRoot.querySelectorAll("tr")].slice(1).map((row) =>
      [...row.querySelectorAll("td")].map((cell) => cell.classList.contains("on")),
    );
    expect(cells).toEqual(fixtures.regionReport.matrix);
  });

  it("neighbor lists render payload order and overlap flags verbatim", async () => {
    app.dispatch({ type: "select-doc", docId: "d0" });
    await flush();

    const root = document.createElement("div");
    new NeighborListsView(root, () => {}).update(app.cache.neighbors, app.state, app.flagContext());
    const tfidf = texts(root, ".space-tfidf .doc-label");
    expect(tfidf).toEqual(["Fourth doc", "First doc", "Third doc"]);
    const emb = texts(root, ".space-emb .doc-label");
    expect(emb).toEqual(["Fourth doc", "Fifth doc", "Second doc"]);
    // the overlap badge appears exactly where the server flagged it
    const flagged = [...root.querySelectorAll(".space-tfidf li")].map((li) =>
      li.classList.contains("in-other-list"),
    );
    expect(flagged).toEqual([true, false, false]);
  });

  it("neighborhood matrix renders server rows and columns", async () => {
    app.dispatch({ type: "select-doc", docId: "d0" });
    await flush();
    const root = document.createElement("div");
    new NeighborhoodMatrixView(root, () => {}).update(app.cache.neighbors, app.state, app.flagContext());
    expect(texts(root, ".term-row")).toEqual(["beta", "alpha"]);
    expect(texts(root, ".doc-col .doc-label")).toEqual([
      "Zeroth doc",
      "Fourth doc",
      "First doc",
      "Third doc",
    ]);
  });

  it("search list renders hit order from the payload", async () => {
    app.dispatch({ type: "search", query: "alpha", mode: "any" });
    await flush();
    const root = document.createElement("div");
    const panel = new SearchPanelView(root, () => {});
    panel.update(app.cache.search, app.state, app.flagContext());
    expect(texts(root, ".search-list .doc-label")).toEqual([
      "Third doc",
      "Zeroth doc",
      "Fifth doc",
    ]);
    // search state captured the payload's hit ids for map coloring
    expect(app.state.search?.hitIds).toEqual(["d3", "d0", "d5"]);
  });

  it("document view marks exactly the payload spans", async () => {
    app.dispatch({ type: "select-doc", docId: "d0" });
    await flush();
    const root = document.createElement("div");
    new DocumentViewPanel(root, () => {}).update(app.cache.document, null, app.state);
    const marks = [...root.querySelectorAll("mark")];
    expect(marks.map((m) => m.textContent)).toEqual(["alpha", "beta", "gamma"]);
    expect(marks[0].className).toContain("hl-salience-3");
    expect(marks[1].className).toContain("hl-search");
    expect(marks[2].className).toContain("hl-salience-1");
  });

  it("disabling highlights renders plain text while spans stay in state", async () => {
    app.dispatch({ type: "select-doc", docId: "d0" });
    await flush();
    app.dispatch({ type: "toggle-highlights" });
    const root = document.createElement("div");
    new DocumentViewPanel(root, () => {}).update(app.cache.document, null, app.state);
    expect(root.querySelectorAll("mark")).toHaveLength(0);
    expect(root.textContent).toContain("alpha beta gamma delta");
    expect(app.cache.document?.salience_spans.length).toBeGreaterThan(0);
  });

  it("replaying the recorded action log reproduces the final state", async () => {
    app.dispatch({ type: "select-doc", docId: "d0" });
    await flush();
    app.dispatch({ type: "select-second", docId: "d1" });
    await flush();
    app.dispatch({ type: "select-region", provenance: { kind: "cell", i: 0, j: 0 } });
    await flush();
    app.dispatch({ type: "search", query: "alpha", mode: "any" });
    await flush();
    app.dispatch({ type: "toggle-favorite", docId: "d3" });
    app.dispatch({ type: "recolor-stem", stem: "alpha" });
    app.dispatch({ type: "back" });
    await flush();

    expect(replay(app.actionLog)).toEqual(app.state);
  });

  it("stale responses lose to newer ones (last write wins)", async () => {
    let release: (() => void) | null = null;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const slowFetch: typeof fetch = async (input, init) => {
      const url = String(input);
      if (url.includes("doc=d0")) {
        await gate; // first neighbors request stalls
      }
      return fixtures.fakeFetch([])(input, init);
    };
    const slowApp = new App(new ApiClient("http://server", slowFetch));
    await slowApp.bootstrap();
    slowApp.dispatch({ type: "select-doc", docId: "d0" });
    slowApp.dispatch({ type: "select-doc", docId: "d1" });
    await flush();
    const settled = slowApp.cache.neighbors;
    release!();
    await flush();
    // the stalled d0 response must not overwrite the newer d1 payload
    expect(slowApp.cache.neighbors).toBe(settled);
  });
});
