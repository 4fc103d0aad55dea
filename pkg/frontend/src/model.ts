// Pattern view-model: the client-side mirror of the server's grid state.
// The server is authoritative; everything here derives from its canonical
// view plus local selection. Patches from accepted edits must reproduce the
// server state exactly (integration-tested against the live service).

export type Point = [number, number];

export interface SegmentView {
  id: number;
  a: Point;
  b: Point;
  active: boolean;
  reason: string;
}

export interface EdgeView {
  panel: number;
  start: Point;
  end: Point;
  seam: number;
  side: string;
  segments: SegmentView[];
}

export interface PanelView {
  name: string;
  face_up: string;
  outline: Point[];
  cells: [number, number, string, string, number][];
}

export interface SeamView {
  edge_a: number;
  edge_b: number;
  pairs: [number, number][];
}

export interface FeatureView {
  kind: string;
  params: Record<string, unknown>;
  revision: number;
}

export interface PatternView {
  phase: string;
  revision: number;
  stage: number;
  panels: Record<string, PanelView>;
  edges: Record<string, EdgeView>;
  seams: Record<string, SeamView>;
  features: FeatureView[];
}

export interface ViewPatch {
  revision: number;
  phase: string;
  stage: number;
  features: FeatureView[];
  panels: Record<string, PanelView>;
  panels_removed: string[];
  edges: Record<string, EdgeView>;
  edges_removed: string[];
  seams: Record<string, SeamView>;
  seams_removed: string[];
}

export interface Diagnostic {
  reason: string;
  detail: string;
  anchor: { panel?: number; at?: Point };
  source: string; // the operation that was refused
}

export type Selection =
  | { kind: "none" }
  | { kind: "panel"; panel: number }
  | { kind: "edge"; panel: number; a: Point; b: Point }
  | { kind: "cell"; panel: number; at: Point }
  | { kind: "point"; panel: number; at: Point };

export function emptyView(): PatternView {
  return {
    phase: "draw",
    revision: 0,
    stage: 0,
    panels: {},
    edges: {},
    seams: {},
    features: [],
  };
}

/** Merge an accepted edit's patch into the view; returns a fresh object. */
export function applyPatch(view: PatternView, patch: ViewPatch): PatternView {
  const next: PatternView = {
    phase: patch.phase,
    revision: patch.revision,
    stage: patch.stage,
    features: patch.features,
    panels: { ...view.panels, ...patch.panels },
    edges: { ...view.edges, ...patch.edges },
    seams: { ...view.seams, ...patch.seams },
  };
  for (const gone of patch.panels_removed) delete next.panels[gone];
  for (const gone of patch.edges_removed) delete next.edges[gone];
  for (const gone of patch.seams_removed) delete next.seams[gone];
  return next;
}

/** Number of matches each active segment currently carries. */
export function matchCounts(view: PatternView): Map<number, number> {
  const counts = new Map<number, number>();
  for (const seam of Object.values(view.seams)) {
    for (const [a, b] of seam.pairs) {
      counts.set(a, (counts.get(a) ?? 0) + 1);
      counts.set(b, (counts.get(b) ?? 0) + 1);
    }
  }
  return counts;
}

/** Cells of one panel as a lookup set keyed "i,j". */
export function cellSet(panel: PanelView): Set<string> {
  return new Set(panel.cells.map(([i, j]) => `${i},${j}`));
}

export interface PlacementView {
  panel: number;
  role: string;
  size: number;
  at: Point;
  cells: Point[];
}

export interface AssemblyView {
  placements: PlacementView[];
  module_count: number;
  optimal: boolean;
  stats: Record<string, unknown>;
}

/** Assembly overlay cells must account for every pattern cell exactly once. */
export function overlayCellCount(assembly: AssemblyView): number {
  return assembly.placements.reduce((n, p) => n + p.cells.length, 0);
}

export function patternCellCount(view: PatternView): number {
  return Object.values(view.panels).reduce((n, p) => n + p.cells.length, 0);
}
