/** Neighborhood views: dual-space lists, term matrix, radial plot. */

import { COLORS, colorClasses } from "../colors.js";
import type { FlagContext } from "../flags.js";
import { flagsFor } from "../flags.js";
import type { NeighborhoodReport } from "../types.js";
import type { Action, SelectionState } from "../state.js";
import { clear, el } from "../dom.js";

export class NeighborListsView {
  constructor(
    private readonly root: HTMLElement,
    private readonly dispatch: (action: Action) => void,
  ) {}

  update(report: NeighborhoodReport | null, state: SelectionState, context: FlagContext): void {
    clear(this.root);
    if (!report) {
      this.root.append(el("p", { class: "placeholder" }, "Select a document."));
      return;
    }
    for (const hood of report.neighborhoods) {
      const isPrimary = hood.center.doc_id === state.primary;
      const centerClass = isPrimary ? "c-neighbors1" : "c-neighbors2";
      const block = el(
        "div",
        { class: "neighborhood" },
        el("h4", { class: centerClass }, hood.center.title || hood.center.doc_id),
      );
      const columns = el("div", { class: "list-columns" });
      for (const [spaceName, entries] of Object.entries(hood.lists)) {
        const column = el("div", { class: "list-column" }, el("h5", {}, spaceName));
        const list = el("ol", { class: `doc-list neighbor-list space-${spaceName}` });
        for (const entry of entries) {
          const markers: string[] = [centerClass];
          if (entry.in_other_list) markers.push("in-other-list");
          if (entry.in_other_selection) markers.push("in-other-selection");
          markers.push(...colorClasses(flagsFor(context, entry.doc_id)).filter((c) => c === "c-selected"));
          list.append(
            el(
              "li",
              { class: markers.join(" "), title: `distance ${entry.distance}` },
              el(
                "span",
                {
                  class: "doc-label",
                  click: (e) =>
                    this.dispatch(
                      (e as MouseEvent).shiftKey
                        ? { type: "select-second", docId: entry.doc_id }
                        : { type: "select-doc", docId: entry.doc_id },
                    ),
                },
                entry.title || entry.doc_id,
              ),
              entry.in_other_list ? el("span", { class: "badge both-lists", title: "also in the other space's list" }, "=") : null,
              entry.in_other_selection
                ? el("span", { class: "badge both-selections", title: "also a neighbor of the other selection" }, "↔")
                : null,
            ),
          );
        }
        column.append(list);
        columns.append(column);
      }
      block.append(columns);
      this.root.append(block);
    }
  }
}

export class NeighborhoodMatrixView {
  constructor(private readonly root: HTMLElement, private readonly dispatch: (action: Action) => void) {}

  update(report: NeighborhoodReport | null, state: SelectionState, context: FlagContext): void {
    clear(this.root);
    if (!report) {
      this.root.append(el("p", { class: "placeholder" }, "Select a document."));
      return;
    }
    const table = el("table", { class: "matrix neighborhood-matrix" });
    const header = el("tr", {}, el("th", {}, ""));
    for (const doc of report.matrix.docs) {
      const classes = colorClasses(flagsFor(context, doc.doc_id)).join(" ");
      header.append(
        el(
          "th",
          { class: `doc-col ${classes}`, title: doc.title },
          el(
            "span",
            { class: "doc-label", click: () => this.dispatch({ type: "select-doc", docId: doc.doc_id }) },
            (doc.title || doc.doc_id).slice(0, 14),
          ),
        ),
      );
    }
    table.append(header);
    report.matrix.cells.forEach((row, t) => {
      const term = report.matrix.terms[t];
      const recolored = state.recoloredStems.includes(term.term) ? " recolored" : "";
      const tr = el("tr", {}, el("th", { class: `term-row${recolored}` }, term.term));
      row.forEach((present) => tr.append(el("td", { class: present ? "cell on" : "cell" }, present ? "■" : "")));
      table.append(tr);
    });
    this.root.append(table);
  }
}

export class RadialView {
  private readonly canvas: HTMLCanvasElement;

  constructor(
    root: HTMLElement,
    private readonly dispatch: (action: Action) => void,
    private readonly size = 260,
  ) {
    this.canvas = el("canvas", { class: "radial" });
    this.canvas.width = size;
    this.canvas.height = size;
    root.append(this.canvas);
    this.canvas.addEventListener("click", (e) => this.onClick(e));
  }

  private points: { doc_id: string; px: number; py: number }[] = [];

  update(report: NeighborhoodReport | null, state: SelectionState, context: FlagContext): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    ctx.clearRect(0, 0, this.size, this.size);
    this.points = [];
    const hood = report?.neighborhoods.find((h) => h.center.doc_id === state.primary);
    if (!hood || !hood.radial) return;
    const cx = this.size / 2;
    const cy = this.size / 2;
    const scale = this.size / 2 - 16;

    ctx.strokeStyle = "#31404f";
    ctx.beginPath();
    ctx.arc(cx, cy, scale, 0, 2 * Math.PI);
    ctx.stroke();

    ctx.beginPath();
    ctx.fillStyle = COLORS.selected;
    ctx.arc(cx, cy, 5, 0, 2 * Math.PI);
    ctx.fill();

    for (const entry of hood.radial.entries) {
      const px = cx + Math.cos(entry.angle) * entry.radius * scale;
      const py = cy - Math.sin(entry.angle) * entry.radius * scale;
      this.points.push({ doc_id: entry.doc_id, px, py });
      const flags = flagsFor(context, entry.doc_id);
      ctx.beginPath();
      ctx.fillStyle = "#b9c6d1";
      ctx.strokeStyle = flags.nbr2 && !flags.nbr1 ? COLORS.neighbors2 : COLORS.neighbors1;
      ctx.lineWidth = 2;
      ctx.arc(px, py, 4, 0, 2 * Math.PI);
      ctx.fill();
      ctx.stroke();
    }
  }

  private onClick(event: MouseEvent): void {
    for (const point of this.points) {
      if (Math.hypot(point.px - event.offsetX, point.py - event.offsetY) < 8) {
        this.dispatch(
          event.shiftKey
            ? { type: "select-second", docId: point.doc_id }
            : { type: "select-doc", docId: point.doc_id },
        );
        return;
      }
    }
  }
}
