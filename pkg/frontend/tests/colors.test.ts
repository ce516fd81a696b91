import { describe, expect, it } from "vitest";

import { COLORS, computePointColor, type PointFlags } from "../src/colors.js";

function flags(partial: Partial<PointFlags>): PointFlags {
  return {
    selected1: false,
    selected2: false,
    nbr1: false,
    nbr2: false,
    hit: false,
    prevHit: false,
    ...partial,
  };
}

describe("selection color contract", () => {
  it("pins the scheme hex values", () => {
    expect(COLORS.selected).toBe("#f2c94c"); // yellow
    expect(COLORS.neighbors1).toBe("#f2994a"); // orange
    expect(COLORS.neighbors2).toBe("#eb7bc0"); // pink
    expect(COLORS.search).toBe("#4caf50"); // green
    expect(COLORS.regionBorder).toBe(COLORS.selected); // yellow region outline
    expect(COLORS.prevSearch).not.toBe(COLORS.search); // one alternate color
  });

  it("selected documents render yellow regardless of other flags", () => {
    expect(computePointColor(flags({ selected1: true }))).toEqual({
      kind: "solid",
      color: "selected",
    });
    expect(computePointColor(flags({ selected2: true, nbr1: true, hit: true }))).toEqual({
      kind: "solid",
      color: "selected",
    });
  });

  it("splits the disc when a point is in both neighborhoods", () => {
    expect(computePointColor(flags({ nbr1: true, nbr2: true }))).toEqual({
      kind: "split",
      left: "neighbors1",
      right: "neighbors2",
    });
  });

  it("neighbors of first are orange, of second pink", () => {
    expect(computePointColor(flags({ nbr1: true }))).toEqual({
      kind: "solid",
      color: "neighbors1",
    });
    expect(computePointColor(flags({ nbr2: true }))).toEqual({
      kind: "solid",
      color: "neighbors2",
    });
  });

  it("search hits are green; previous search uses the alternate color", () => {
    expect(computePointColor(flags({ hit: true }))).toEqual({ kind: "solid", color: "search" });
    expect(computePointColor(flags({ prevHit: true }))).toEqual({
      kind: "solid",
      color: "prevSearch",
    });
    // current search beats the one-step-old overlay
    expect(computePointColor(flags({ hit: true, prevHit: true }))).toEqual({
      kind: "solid",
      color: "search",
    });
  });

  it("neighbor beats hit beats previous hit", () => {
    expect(computePointColor(flags({ nbr1: true, hit: true, prevHit: true }))).toEqual({
      kind: "solid",
      color: "neighbors1",
    });
  });

  it("no flags renders the base heatmap style", () => {
    expect(computePointColor(flags({}))).toEqual({ kind: "base" });
  });

  it("full truth table is stable", () => {
    const names: (keyof PointFlags)[] = ["selected1", "selected2", "nbr1", "nbr2", "hit", "prevHit"];
    const table: Record<string, string> = {};
    for (let mask = 0; mask < 64; mask++) {
      const f = flags({});
      names.forEach((name, bit) => {
        f[name] = Boolean(mask & (1 << bit));
      });
      const color = computePointColor(f);
      table[mask.toString(2).padStart(6, "0")] =
        color.kind === "solid" ? color.color : color.kind;
    }
    expect(table).toMatchSnapshot();
  });
});
