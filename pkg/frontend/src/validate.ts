// Client-side pre-validation. The server re-checks everything; these exist
// so obviously invalid strokes and out-of-order features are refused inline
// without a round trip.

import type { PatternView, Point } from "./model.js";

export function snapToGrid(x: number, y: number): Point {
  return [Math.round(x), Math.round(y)];
}

/** Closed, axis-aligned, integer, non-degenerate outline check. */
export function outlineProblem(points: Point[]): string | null {
  const pts = [...points];
  if (pts.length >= 2) {
    const [fx, fy] = pts[0];
    const [lx, ly] = pts[pts.length - 1];
    if (fx === lx && fy === ly) pts.pop();
  }
  if (pts.length < 4) return "outline needs at least four corners";
  for (const [x, y] of pts) {
    if (!Number.isInteger(x) || !Number.isInteger(y)) {
      return `vertex (${x}, ${y}) is off the grid`;
    }
  }
  for (let k = 0; k < pts.length; k++) {
    const [ax, ay] = pts[k];
    const [bx, by] = pts[(k + 1) % pts.length];
    if (ax === bx && ay === by) return "zero-length edge";
    if (ax !== bx && ay !== by) {
      return `edge (${ax},${ay})-(${bx},${by}) is not horizontal or vertical`;
    }
  }
  const seen = new Set<string>();
  for (const [x, y] of pts) {
    const key = `${x},${y}`;
    if (seen.has(key)) return "outline revisits a corner";
    seen.add(key);
  }
  return null;
}

export function edgeLengthUnits(a: Point, b: Point): number {
  return Math.abs(a[0] - b[0]) + Math.abs(a[1] - b[1]);
}

/** Feature ordering gate: gathers, then pleats, then darts. */
export const STAGE_OF: Record<string, number> = {
  gather: 1,
  convert_pleat: 2,
  insert_pleat: 2,
  resolve_expand: 2,
  resolve_delete: 2,
  dart: 3,
};

export function orderProblem(view: PatternView, op: string): string | null {
  const stage = STAGE_OF[op];
  if (stage === undefined) return null;
  if (view.phase !== "features") {
    return "features need the pattern in the features phase";
  }
  if (view.stage > stage) {
    return "features must be added in order: gathers, then pleats, then darts";
  }
  return null;
}

export function stitchProblem(
  view: PatternView,
  a: { panel: number; a: Point; b: Point },
  b: { panel: number; a: Point; b: Point },
): string | null {
  const la = edgeLengthUnits(a.a, a.b);
  const lb = edgeLengthUnits(b.a, b.b);
  if (la !== lb) {
    return `flat lengths differ: ${la} vs ${lb} units`;
  }
  if (a.panel === b.panel && sameEdge(a, b)) return "an edge cannot seam to itself";
  return null;
}

function sameEdge(
  a: { a: Point; b: Point },
  b: { a: Point; b: Point },
): boolean {
  const key = (p: Point) => `${p[0]},${p[1]}`;
  const ka = [key(a.a), key(a.b)].sort().join("|");
  const kb = [key(b.a), key(b.b)].sort().join("|");
  return ka === kb;
}
