/** Corpus map: binned heatmap with overlay points, region border, cell hover. */

import { COLORS, computePointColor } from "../colors.js";
import type { FlagContext } from "../flags.js";
import { flagsFor } from "../flags.js";
import type { CellInfo, LayoutPayload, Provenance } from "../types.js";
import type { Action } from "../state.js";
import { clear, el } from "../dom.js";

const POINT_RADIUS = 3.5;

export class CorpusMapView {
  private readonly canvas: HTMLCanvasElement;
  private readonly tooltip: HTMLElement;
  private layout: LayoutPayload | null = null;
  private context: FlagContext | null = null;
  private region: Provenance | null = null;
  private dragStart: [number, number] | null = null;
  private hoverCell: [number, number] | null = null;

  constructor(
    root: HTMLElement,
    private readonly dispatch: (action: Action) => void,
    private readonly fetchCell: (i: number, j: number) => Promise<CellInfo>,
    private readonly width = 480,
    private readonly height = 420,
  ) {
    this.canvas = el("canvas");
    this.canvas.width = width;
    this.canvas.height = height;
    this.canvas.className = "corpus-map";
    this.tooltip = el("div", { class: "map-tooltip hidden" });
    root.append(this.canvas, this.tooltip);
    this.canvas.addEventListener("mousedown", (e) => this.onDown(e));
    this.canvas.addEventListener("mouseup", (e) => this.onUp(e));
    this.canvas.addEventListener("mousemove", (e) => this.onMove(e));
    this.canvas.addEventListener("mouseleave", () => this.hideTooltip());
  }

  update(layout: LayoutPayload, context: FlagContext, region: Provenance | null): void {
    this.layout = layout;
    this.context = context;
    this.region = region;
    this.draw();
  }

  // -------- coordinate transforms (data <-> pixel)

  private toPixel(x: number, y: number): [number, number] {
    const grid = this.layout!.grid;
    const [x0, x1] = grid.x_range;
    const [y0, y1] = grid.y_range;
    const px = x1 === x0 ? this.width / 2 : ((x - x0) / (x1 - x0)) * this.width;
    const py = y1 === y0 ? this.height / 2 : this.height - ((y - y0) / (y1 - y0)) * this.height;
    return [px, py];
  }

  private toData(px: number, py: number): [number, number] {
    const grid = this.layout!.grid;
    const [x0, x1] = grid.x_range;
    const [y0, y1] = grid.y_range;
    return [
      x0 + (px / this.width) * (x1 - x0),
      y0 + ((this.height - py) / this.height) * (y1 - y0),
    ];
  }

  private cellAt(px: number, py: number): [number, number] {
    const bins = this.layout!.grid.bins;
    const i = Math.min(bins - 1, Math.max(0, Math.floor((px / this.width) * bins)));
    const j = Math.min(bins - 1, Math.max(0, Math.floor(((this.height - py) / this.height) * bins)));
    return [i, j];
  }

  // -------- rendering

  private draw(): void {
    if (!this.layout || !this.context) return;
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    ctx.clearRect(0, 0, this.width, this.height);
    const { bins, counts } = this.layout.grid;
    const max = Math.max(1, ...counts.map((row) => Math.max(...row)));
    const cellW = this.width / bins;
    const cellH = this.height / bins;
    for (let i = 0; i < bins; i++) {
      for (let j = 0; j < bins; j++) {
        const count = counts[i][j];
        if (count === 0) continue;
        const shade = 0.12 + 0.8 * Math.sqrt(count / max);
        ctx.fillStyle = `rgba(42, 74, 107, ${shade.toFixed(3)})`;
        ctx.fillRect(i * cellW, this.height - (j + 1) * cellH, cellW, cellH);
      }
    }

    // region border (yellow outline)
    if (this.region) {
      ctx.strokeStyle = COLORS.regionBorder;
      ctx.lineWidth = 2;
      if (this.region.kind === "cell") {
        ctx.strokeRect(
          this.region.i * cellW,
          this.height - (this.region.j + 1) * cellH,
          cellW,
          cellH,
        );
      } else if (this.region.kind === "rectangle") {
        const [ax, ay] = this.toPixel(this.region.x0, this.region.y0);
        const [bx, by] = this.toPixel(this.region.x1, this.region.y1);
        ctx.strokeRect(Math.min(ax, bx), Math.min(ay, by), Math.abs(bx - ax), Math.abs(by - ay));
      }
    }

    // overlay points: only flagged documents are drawn above the heatmap
    for (const doc of this.layout.docs) {
      const flags = flagsFor(this.context, doc.doc_id);
      const color = computePointColor(flags);
      if (color.kind === "base") continue;
      const [px, py] = this.toPixel(doc.x, doc.y);
      if (color.kind === "split") {
        ctx.beginPath();
        ctx.fillStyle = COLORS.neighbors1;
        ctx.arc(px, py, POINT_RADIUS, Math.PI / 2, (3 * Math.PI) / 2);
        ctx.fill();
        ctx.beginPath();
        ctx.fillStyle = COLORS.neighbors2;
        ctx.arc(px, py, POINT_RADIUS, -Math.PI / 2, Math.PI / 2);
        ctx.fill();
      } else {
        ctx.beginPath();
        ctx.fillStyle = COLORS[color.color];
        ctx.arc(px, py, POINT_RADIUS, 0, 2 * Math.PI);
        ctx.fill();
      }
      ctx.strokeStyle = "#1d2733";
      ctx.lineWidth = 0.5;
      ctx.stroke();
    }
  }

  // -------- interactions

  private onDown(event: MouseEvent): void {
    this.dragStart = [event.offsetX, event.offsetY];
  }

  private onUp(event: MouseEvent): void {
    const start = this.dragStart;
    this.dragStart = null;
    if (!this.layout) return;
    const [px, py] = [event.offsetX, event.offsetY];
    if (start && Math.hypot(px - start[0], py - start[1]) > 6) {
      const [x0, y0] = this.toData(start[0], start[1]);
      const [x1, y1] = this.toData(px, py);
      this.dispatch({ type: "select-region", provenance: { kind: "rectangle", x0, y0, x1, y1 } });
      return;
    }
    const picked = this.pickPoint(px, py);
    if (picked) {
      this.dispatch(
        event.shiftKey ? { type: "select-second", docId: picked } : { type: "select-doc", docId: picked },
      );
      return;
    }
    const [i, j] = this.cellAt(px, py);
    this.dispatch({ type: "select-region", provenance: { kind: "cell", i, j } });
  }

  private pickPoint(px: number, py: number): string | null {
    if (!this.layout || !this.context) return null;
    let best: string | null = null;
    let bestDistance = 8;
    for (const doc of this.layout.docs) {
      if (computePointColor(flagsFor(this.context, doc.doc_id)).kind === "base") continue;
      const [qx, qy] = this.toPixel(doc.x, doc.y);
      const distance = Math.hypot(qx - px, qy - py);
      if (distance < bestDistance) {
        best = doc.doc_id;
        bestDistance = distance;
      }
    }
    return best;
  }

  private onMove(event: MouseEvent): void {
    if (!this.layout) return;
    const [i, j] = this.cellAt(event.offsetX, event.offsetY);
    if (this.hoverCell && this.hoverCell[0] === i && this.hoverCell[1] === j) return;
    this.hoverCell = [i, j];
    void this.fetchCell(i, j).then((info) => {
      if (!this.hoverCell || this.hoverCell[0] !== info.i || this.hoverCell[1] !== info.j) return;
      this.showTooltip(event, info);
    });
  }

  private showTooltip(event: MouseEvent, info: CellInfo): void {
    clear(this.tooltip);
    this.tooltip.classList.remove("hidden");
    this.tooltip.style.left = `${event.offsetX + 14}px`;
    this.tooltip.style.top = `${event.offsetY + 14}px`;
    this.tooltip.append(
      el("div", { class: "tooltip-count" }, `${info.count} documents`),
      el("div", { class: "tooltip-terms" }, info.terms.map((t) => t.term).join(", ")),
    );
  }

  private hideTooltip(): void {
    this.hoverCell = null;
    this.tooltip.classList.add("hidden");
  }
}
