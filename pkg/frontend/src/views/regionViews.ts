/** Region views: zoomed scatter, reorderable term/doc matrix, exemplar list.
 *
 * Rankings and matrix cells are rendered exactly as the server sent them;
 * the only client-side work is geometric membership for the scatter.
 */

import { COLORS, colorClasses, computePointColor } from "../colors.js";
import type { FlagContext } from "../flags.js";
import { flagsFor } from "../flags.js";
import type { LayoutPayload, Provenance, RegionReport } from "../types.js";
import type { Action, SelectionState } from "../state.js";
import { clear, el, option } from "../dom.js";

export function regionMembers(layout: LayoutPayload, provenance: Provenance): string[] {
  if (provenance.kind === "ids") {
    return [...provenance.doc_ids];
  }
  const bins = layout.grid.bins;
  const [gx0, gx1] = layout.grid.x_range;
  const [gy0, gy1] = layout.grid.y_range;
  const cellIndex = (value: number, low: number, high: number): number => {
    if (high === low) return 0;
    const t = ((value - low) * bins) / (high - low);
    return Math.min(bins - 1, Math.max(0, Math.ceil(t) - 1));
  };
  if (provenance.kind === "cell") {
    return layout.docs
      .filter(
        (d) => cellIndex(d.x, gx0, gx1) === provenance.i && cellIndex(d.y, gy0, gy1) === provenance.j,
      )
      .map((d) => d.doc_id);
  }
  const x0 = Math.min(provenance.x0, provenance.x1);
  const x1 = Math.max(provenance.x0, provenance.x1);
  const y0 = Math.min(provenance.y0, provenance.y1);
  const y1 = Math.max(provenance.y0, provenance.y1);
  return layout.docs
    .filter((d) => d.x >= x0 && d.x <= x1 && d.y >= y0 && d.y <= y1)
    .map((d) => d.doc_id);
}

export class RegionScatterView {
  private readonly canvas: HTMLCanvasElement;

  constructor(
    root: HTMLElement,
    private readonly dispatch: (action: Action) => void,
    private readonly width = 300,
    private readonly height = 260,
  ) {
    this.canvas = el("canvas", { class: "region-scatter" });
    this.canvas.width = width;
    this.canvas.height = height;
    root.append(this.canvas);
    this.canvas.addEventListener("click", (e) => this.onClick(e));
  }

  private points: { doc_id: string; px: number; py: number }[] = [];

  update(layout: LayoutPayload | null, region: Provenance | null, context: FlagContext): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    ctx.clearRect(0, 0, this.width, this.height);
    this.points = [];
    if (!layout || !region) return;
    const members = regionMembers(layout, region);
    const byId = new Map(layout.docs.map((d) => [d.doc_id, d]));
    const docs = members.map((id) => byId.get(id)).filter((d) => d !== undefined);
    if (docs.length === 0) return;
    const xs = docs.map((d) => d!.x);
    const ys = docs.map((d) => d!.y);
    const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
    const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
    const pad = 12;
    for (const doc of docs) {
      const px = x1 === x0 ? this.width / 2 : pad + ((doc!.x - x0) / (x1 - x0)) * (this.width - 2 * pad);
      const py =
        y1 === y0 ? this.height / 2 : this.height - pad - ((doc!.y - y0) / (y1 - y0)) * (this.height - 2 * pad);
      this.points.push({ doc_id: doc!.doc_id, px, py });
      const color = computePointColor(flagsFor(context, doc!.doc_id));
      ctx.beginPath();
      ctx.fillStyle =
        color.kind === "solid" ? COLORS[color.color] : color.kind === "split" ? COLORS.neighbors1 : COLORS.base;
      ctx.arc(px, py, 4, 0, 2 * Math.PI);
      ctx.fill();
      if (color.kind === "split") {
        ctx.beginPath();
        ctx.fillStyle = COLORS.neighbors2;
        ctx.arc(px, py, 4, -Math.PI / 2, Math.PI / 2);
        ctx.fill();
      }
    }
  }

  private onClick(event: MouseEvent): void {
    let best: string | null = null;
    let bestDistance = 10;
    for (const point of this.points) {
      const distance = Math.hypot(point.px - event.offsetX, point.py - event.offsetY);
      if (distance < bestDistance) {
        best = point.doc_id;
        bestDistance = distance;
      }
    }
    if (best) {
      this.dispatch(
        event.shiftKey ? { type: "select-second", docId: best } : { type: "select-doc", docId: best },
      );
    }
  }
}

export class RegionMatrixView {
  constructor(
    private readonly root: HTMLElement,
    private readonly dispatch: (action: Action) => void,
    private readonly termMetrics: string[],
    private readonly docMetrics: string[],
  ) {}

  update(report: RegionReport | null, state: SelectionState, context: FlagContext): void {
    clear(this.root);
    if (!report) {
      this.root.append(el("p", { class: "placeholder" }, "Select a region on the map."));
      return;
    }
    const termSelect = el("select", {
      class: "term-metric",
      change: (e) =>
        this.dispatch({ type: "set-term-metric", metric: (e.target as HTMLSelectElement).value }),
    });
    for (const metric of this.termMetrics) termSelect.append(option(metric, metric === state.termMetric));
    const docSelect = el("select", {
      class: "doc-metric",
      change: (e) =>
        this.dispatch({ type: "set-doc-metric", metric: (e.target as HTMLSelectElement).value }),
    });
    for (const metric of this.docMetrics) docSelect.append(option(metric, metric === state.docMetric));
    this.root.append(
      el(
        "div",
        { class: "matrix-controls" },
        el("label", {}, "terms ", termSelect),
        el("label", {}, " docs ", docSelect),
        el("span", { class: "region-size" }, ` ${report.n_r} documents`),
      ),
    );

    const table = el("table", { class: "matrix" });
    const header = el("tr", {}, el("th", {}, ""));
    for (const doc of report.docs) {
      const classes = colorClasses(flagsFor(context, doc.doc_id)).join(" ");
      header.append(
        el(
          "th",
          { class: `doc-col ${classes}`, title: doc.title },
          el(
            "span",
            {
              class: "doc-label",
              click: () => this.dispatch({ type: "select-doc", docId: doc.doc_id }),
            },
            doc.title.slice(0, 18) || doc.doc_id,
          ),
        ),
      );
    }
    table.append(header);
    report.matrix.forEach((row, t) => {
      const term = report.terms[t];
      const recolored = state.recoloredStems.includes(term.term) ? " recolored" : "";
      const tr = el(
        "tr",
        {},
        el("th", { class: `term-row${recolored}`, title: term.score.toPrecision(4) }, term.term),
      );
      row.forEach((present) => {
        tr.append(el("td", { class: present ? "cell on" : "cell" }, present ? "■" : ""));
      });
      table.append(tr);
    });
    this.root.append(table);
  }
}

export class RegionListView {
  constructor(
    private readonly root: HTMLElement,
    private readonly dispatch: (action: Action) => void,
  ) {}

  update(report: RegionReport | null, state: SelectionState, context: FlagContext): void {
    clear(this.root);
    if (!report) {
      this.root.append(el("p", { class: "placeholder" }, "No region selected."));
      return;
    }
    const list = el("ol", { class: "doc-list region-list" });
    for (const doc of report.docs) {
      const classes = colorClasses(flagsFor(context, doc.doc_id)).join(" ");
      const star = state.favorites.includes(doc.doc_id) ? "★" : "☆";
      list.append(
        el(
          "li",
          { class: classes },
          el(
            "button",
            {
              class: "favorite",
              click: () => this.dispatch({ type: "toggle-favorite", docId: doc.doc_id }),
            },
            star,
          ),
          el(
            "span",
            {
              class: "doc-label",
              click: (e) =>
                this.dispatch(
                  (e as MouseEvent).shiftKey
                    ? { type: "select-second", docId: doc.doc_id }
                    : { type: "select-doc", docId: doc.doc_id },
                ),
            },
            `${doc.title || doc.doc_id}`,
          ),
          el("span", { class: "score" }, ` ${doc.score}`),
        ),
      );
    }
    this.root.append(list);
  }
}
