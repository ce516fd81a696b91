/** Search panel and corpus-scale hit list (green in the color scheme). */

import { colorClasses } from "../colors.js";
import type { FlagContext } from "../flags.js";
import { flagsFor } from "../flags.js";
import type { SearchReport } from "../types.js";
import type { Action, SelectionState } from "../state.js";
import { clear, el, option } from "../dom.js";

export class SearchPanelView {
  private readonly results: HTMLElement;
  private readonly input: HTMLInputElement;
  private readonly mode: HTMLSelectElement;

  constructor(
    root: HTMLElement,
    private readonly dispatch: (action: Action) => void,
  ) {
    this.input = el("input", { type: "search", placeholder: "search terms..." });
    this.mode = el("select", {});
    this.mode.append(option("any", true), option("all", false));
    const go = el(
      "button",
      {
        click: () => this.submit(),
      },
      "search",
    );
    this.input.addEventListener("keydown", (e) => {
      if ((e as KeyboardEvent).key === "Enter") this.submit();
    });
    this.results = el("div", { class: "search-results" });
    root.append(el("div", { class: "search-bar" }, this.input, this.mode, go), this.results);
  }

  private submit(): void {
    const query = this.input.value.trim();
    if (!query) return;
    this.dispatch({ type: "search", query, mode: this.mode.value as "all" | "any" });
  }

  update(report: SearchReport | null, state: SelectionState, context: FlagContext): void {
    clear(this.results);
    if (!report) return;
    this.results.append(
      el("div", { class: "search-summary" }, `${report.total} hits for "${report.query}"`),
    );
    const list = el("ol", { class: "doc-list search-list" });
    for (const hit of report.hits) {
      // the search list itself never renders green (every row would be);
      // selection colors still apply
      const classes = colorClasses(flagsFor(context, hit.doc_id)).filter((c) => c !== "c-search");
      list.append(
        el(
          "li",
          { class: classes.join(" "), title: `score ${hit.score}` },
          el(
            "span",
            {
              class: "doc-label",
              click: (e) =>
                this.dispatch(
                  (e as MouseEvent).shiftKey
                    ? { type: "select-second", docId: hit.doc_id }
                    : { type: "select-doc", docId: hit.doc_id },
                ),
            },
            hit.title || hit.doc_id,
          ),
          hit.year != null ? el("span", { class: "year" }, ` ${hit.year}`) : null,
        ),
      );
    }
    this.results.append(list);
  }
}

export function favoritesBlob(favorites: readonly string[], titles: Map<string, string>): string {
  const rows = favorites.map((docId) => ({
    doc_id: docId,
    title: titles.get(docId) ?? "",
    link: /^10\.\d{4,9}\//.test(docId) ? `https://doi.org/${docId}` : null,
  }));
  return JSON.stringify(rows, null, 2);
}

export class FavoritesView {
  constructor(
    private readonly root: HTMLElement,
    private readonly dispatch: (action: Action) => void,
    private readonly titleOf: (docId: string) => string,
  ) {}

  update(state: SelectionState): void {
    clear(this.root);
    if (state.favorites.length === 0) {
      this.root.append(el("p", { class: "placeholder" }, "No saved documents yet."));
      return;
    }
    const list = el("ul", { class: "doc-list favorites-list" });
    for (const docId of state.favorites) {
      list.append(
        el(
          "li",
          {},
          el(
            "span",
            { class: "doc-label", click: () => this.dispatch({ type: "select-doc", docId }) },
            this.titleOf(docId) || docId,
          ),
          el(
            "button",
            { class: "remove", click: () => this.dispatch({ type: "toggle-favorite", docId }) },
            "×",
          ),
        ),
      );
    }
    const exportButton = el(
      "button",
      {
        class: "export",
        click: () => {
          const titles = new Map(state.favorites.map((d) => [d, this.titleOf(d)]));
          const blob = new Blob([favoritesBlob(state.favorites, titles)], {
            type: "application/json",
          });
          const anchor = el("a", {
            href: URL.createObjectURL(blob),
            download: "favorites.json",
          });
          anchor.click();
          URL.revokeObjectURL(anchor.href);
        },
      },
      "export list",
    );
    this.root.append(list, exportButton);
  }
}
