/** Entry point: mount all views and wire them to the app shell. */

import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { el } from "./dom.js";
import { CorpusMapView } from "./views/corpusMap.js";
import { DocumentViewPanel } from "./views/documentView.js";
import { NeighborListsView, NeighborhoodMatrixView, RadialView } from "./views/neighborViews.js";
import { RegionListView, RegionMatrixView, RegionScatterView } from "./views/regionViews.js";
import { FavoritesView, SearchPanelView } from "./views/searchPanel.js";

function apiBase(): string {
  const override = new URLSearchParams(window.location.search).get("api");
  return override ?? "";
}

async function start(): Promise<void> {
  const api = new ApiClient(apiBase());
  const app = new App(api);
  const dispatch = (action: Parameters<App["dispatch"]>[0]) => app.dispatch(action);

  const status = document.getElementById("status")!;
  app.onError = (message) => {
    status.textContent = message;
    status.classList.add("error");
    window.setTimeout(() => status.classList.remove("error"), 4000);
  };

  const searchPanel = new SearchPanelView(document.getElementById("search-panel")!, dispatch);
  const map = new CorpusMapView(
    document.getElementById("corpus-map")!,
    dispatch,
    (i, j) => api.cell(i, j),
  );
  const regionScatter = new RegionScatterView(document.getElementById("region-scatter")!, dispatch);
  let regionMatrix: RegionMatrixView | null = null;
  const regionList = new RegionListView(document.getElementById("region-list")!, dispatch);
  const neighborLists = new NeighborListsView(document.getElementById("neighbor-lists")!, dispatch);
  const neighborhoodMatrix = new NeighborhoodMatrixView(
    document.getElementById("neighborhood-matrix")!,
    dispatch,
  );
  const radial = new RadialView(document.getElementById("radial-view")!, dispatch);
  const documentPanel = new DocumentViewPanel(document.getElementById("document-view")!, dispatch);
  const favorites = new FavoritesView(
    document.getElementById("favorites")!,
    dispatch,
    (docId) => app.cache.layout?.docs.find((d) => d.doc_id === docId)?.doc_id ?? docId,
  );

  const controls = document.getElementById("controls")!;
  const back = el("button", { click: () => dispatch({ type: "back" }) }, "back");
  const clearButton = el("button", { click: () => dispatch({ type: "clear" }) }, "clear");
  controls.append(back, clearButton);

  app.onRender = () => {
    const context = app.flagContext();
    if (app.cache.meta && !regionMatrix) {
      regionMatrix = new RegionMatrixView(
        document.getElementById("region-matrix")!,
        dispatch,
        app.cache.meta.metrics.term,
        app.cache.meta.metrics.doc,
      );
      status.textContent = `${app.cache.meta.name}: ${app.cache.meta.n_g} documents, ${app.cache.meta.vocab_size} terms`;
    }
    if (app.cache.layout) {
      map.update(app.cache.layout, context, app.state.region);
      regionScatter.update(app.cache.layout, app.state.region, context);
    }
    regionMatrix?.update(app.cache.region, app.state, context);
    regionList.update(app.cache.region, app.state, context);
    neighborLists.update(app.cache.neighbors, app.state, context);
    neighborhoodMatrix.update(app.cache.neighbors, app.state, context);
    radial.update(app.cache.neighbors, app.state, context);
    documentPanel.update(app.cache.document, app.cache.pair, app.state);
    searchPanel.update(app.cache.search, app.state, context);
    favorites.update(app.state);
  };

  await app.bootstrap();
}

void start();
