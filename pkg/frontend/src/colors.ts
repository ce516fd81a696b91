/** The fixed selection color scheme, applied identically in every view.
 *
 * Selected documents are yellow, neighbors of the first selection orange,
 * neighbors of the second pink, search results green; the previous search
 * overlay uses the one alternate color. Points inside both neighborhoods
 * render as a split disc.
 */

export const COLORS = {
  selected: "#f2c94c", // yellow
  neighbors1: "#f2994a", // orange
  neighbors2: "#eb7bc0", // pink
  search: "#4caf50", // green
  prevSearch: "#56a8d8", // alternate color for the previous search overlay
  regionBorder: "#f2c94c", // yellow outline
  base: "#9aa7b1",
} as const;

export type ColorName = keyof typeof COLORS;

export interface PointFlags {
  selected1: boolean;
  selected2: boolean;
  nbr1: boolean;
  nbr2: boolean;
  hit: boolean;
  prevHit: boolean;
}

export type PointColor =
  | { kind: "solid"; color: "selected" | "neighbors1" | "neighbors2" | "search" | "prevSearch" }
  | { kind: "split"; left: "neighbors1"; right: "neighbors2" }
  | { kind: "base" };

/** Solid-fill precedence: selected > neighbor > hit > previous hit; being in
 * both neighborhoods renders a split disc instead of a solid fill. */
export function computePointColor(flags: PointFlags): PointColor {
  if (flags.selected1 || flags.selected2) {
    return { kind: "solid", color: "selected" };
  }
  if (flags.nbr1 && flags.nbr2) {
    return { kind: "split", left: "neighbors1", right: "neighbors2" };
  }
  if (flags.nbr1) {
    return { kind: "solid", color: "neighbors1" };
  }
  if (flags.nbr2) {
    return { kind: "solid", color: "neighbors2" };
  }
  if (flags.hit) {
    return { kind: "solid", color: "search" };
  }
  if (flags.prevHit) {
    return { kind: "solid", color: "prevSearch" };
  }
  return { kind: "base" };
}

/** css class list for non-map views (lists, matrices, radial outlines). */
export function colorClasses(flags: PointFlags): string[] {
  const color = computePointColor(flags);
  if (color.kind === "solid") {
    return [`c-${color.color}`];
  }
  if (color.kind === "split") {
    return ["c-neighbors1", "c-neighbors2", "c-split"];
  }
  return [];
}
