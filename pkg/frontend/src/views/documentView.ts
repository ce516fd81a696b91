/** Document reader with salience (yellow), region (cyan), search (green),
 * and pair highlighting; dual selection shows both documents side by side. */

import type { DocumentReport, PairReport, Span } from "../types.js";
import type { Action, SelectionState } from "../state.js";
import { clear, el } from "../dom.js";

interface Segment {
  start: number;
  end: number;
  classes: string[];
  stem: string | null;
}

/** Merge span sets into non-overlapping segments. All spans are token spans
 * from one tokenizer, so overlapping spans share exact boundaries. */
export function mergeSpans(
  body: string,
  report: DocumentReport,
  highlightPair: boolean,
): Segment[] {
  const byKey = new Map<string, Segment>();
  const add = (span: Span, cls: string) => {
    const key = `${span.start}:${span.end}`;
    const existing = byKey.get(key);
    if (existing) {
      existing.classes.push(cls);
    } else {
      byKey.set(key, { start: span.start, end: span.end, classes: [cls], stem: span.stem });
    }
  };
  for (const span of report.salience_spans) add(span, `hl-salience-${span.intensity ?? 1}`);
  for (const span of report.region_spans ?? []) add(span, "hl-region");
  for (const span of report.search_spans ?? []) add(span, "hl-search");
  if (highlightPair) {
    for (const span of report.pair_spans ?? []) add(span, `hl-pair-${span.intensity ?? 1}`);
  }
  return [...byKey.values()].sort((a, b) => a.start - b.start);
}

function renderBody(
  report: DocumentReport,
  state: SelectionState,
  dispatch: (action: Action) => void,
): HTMLElement {
  const body = report.doc.body;
  const container = el("p", { class: "doc-body" });
  if (!state.highlightsEnabled) {
    container.textContent = body; // spans stay in state, rendering is plain
    return container;
  }
  const segments = mergeSpans(body, report, true);
  let position = 0;
  for (const segment of segments) {
    if (segment.start > position) {
      container.append(body.slice(position, segment.start));
    }
    const classes = [...segment.classes];
    if (segment.stem && state.recoloredStems.includes(segment.stem)) classes.push("recolored");
    container.append(
      el(
        "mark",
        {
          class: classes.join(" "),
          title: segment.stem ?? "",
          dblclick: () => {
            if (segment.stem) dispatch({ type: "recolor-stem", stem: segment.stem });
          },
        },
        body.slice(segment.start, segment.end),
      ),
    );
    position = segment.end;
  }
  if (position < body.length) container.append(body.slice(position));
  return container;
}

function renderOne(
  report: DocumentReport,
  state: SelectionState,
  dispatch: (action: Action) => void,
): HTMLElement {
  const doc = report.doc;
  const favorite = state.favorites.includes(doc.doc_id) ? "★ saved" : "☆ save";
  const meta = [doc.year, doc.venue, doc.authors?.join(", ")].filter(Boolean).join(" · ");
  const link = /^10\.\d{4,9}\//.test(doc.doc_id)
    ? el("a", { href: `https://doi.org/${doc.doc_id}`, target: "_blank", class: "doi" }, "open")
    : null;
  return el(
    "article",
    { class: "document" },
    el(
      "header",
      {},
      el("h3", {}, doc.title || doc.doc_id),
      el("div", { class: "doc-meta" }, meta, link ? " " : null, link),
      el(
        "button",
        { class: "favorite", click: () => dispatch({ type: "toggle-favorite", docId: doc.doc_id }) },
        favorite,
      ),
    ),
    renderBody(report, state, dispatch),
  );
}

export class DocumentViewPanel {
  constructor(
    private readonly root: HTMLElement,
    private readonly dispatch: (action: Action) => void,
  ) {}

  update(
    primary: DocumentReport | null,
    pair: PairReport | null,
    state: SelectionState,
  ): void {
    clear(this.root);
    const toggle = el(
      "label",
      { class: "highlight-toggle" },
      (() => {
        const box = el("input", {
          type: "checkbox",
          change: () => this.dispatch({ type: "toggle-highlights" }),
        });
        box.checked = state.highlightsEnabled;
        return box;
      })(),
      " highlights",
    );
    this.root.append(toggle);
    if (pair && state.secondary) {
      this.root.append(
        el(
          "div",
          { class: "pair-documents" },
          renderOne(pair.a, state, this.dispatch),
          renderOne(pair.b, state, this.dispatch),
        ),
      );
      const weights = pair.pair.weights
        .map((w) => w.term)
        .slice(0, 12)
        .join(", ");
      this.root.append(el("div", { class: "pair-weights" }, weights ? `shared: ${weights}` : "no shared terms"));
      return;
    }
    if (primary) {
      this.root.append(renderOne(primary, state, this.dispatch));
      return;
    }
    this.root.append(el("p", { class: "placeholder" }, "Select a document to read it here."));
  }
}
