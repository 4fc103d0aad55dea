// Editor controller: the interactive flows, shared by the browser shell and
// the integration tests. Optimistic pre-validation refuses bad input inline;
// the server stays authoritative, and after any rejection the displayed
// pattern is exactly the server state.

import { Api } from "./api.js";
import {
  applyPatch,
  emptyView,
  type AssemblyView,
  type Diagnostic,
  type PatternView,
  type Point,
  type Selection,
} from "./model.js";
import { orderProblem, outlineProblem, stitchProblem } from "./validate.js";

export type ViewName = "pattern" | "assembly";

export interface DartParams {
  orientation: "v" | "h";
  width_cm: number;
  height_units: number;
  style: "auto" | "triangle" | "diamond";
}

export class EditorController {
  view: PatternView = emptyView();
  patternId: string | null = null;
  currentView: ViewName = "pattern";
  selection: Selection = { kind: "none" };
  pendingEdge: { panel: number; a: Point; b: Point } | null = null;
  pleatDirection: "left" | "right" | "up" | "down" = "right";
  dartParams: DartParams = {
    orientation: "v",
    width_cm: 8.0,
    height_units: 2,
    style: "auto",
  };
  diagnostics: Diagnostic[] = [];
  assembly: AssemblyView | null = null;
  listeners: (() => void)[] = [];

  constructor(public api: Api) {}

  onChange(fn: () => void) {
    this.listeners.push(fn);
  }

  private changed() {
    for (const fn of this.listeners) fn();
  }

  private diag(reason: string, detail: string, source: string,
               anchor: Diagnostic["anchor"] = {}) {
    this.diagnostics.push({ reason, detail, anchor, source });
    this.changed();
  }

  clearDiagnostics() {
    this.diagnostics = [];
    this.changed();
  }

  // -- session -------------------------------------------------------------

  async newPattern(config?: Record<string, unknown>) {
    const created = await this.api.createPattern(config);
    this.patternId = created.id;
    this.view = created.view;
    this.assembly = null;
    this.clearDiagnostics();
    return created.id;
  }

  /** Open a template; phase1Only supports the redraw-to-resize workflow. */
  async openTemplate(name: string, phase1Only = false) {
    const created = await this.api.createFromTemplate(name, phase1Only);
    this.patternId = created.id;
    this.view = created.view;
    this.assembly = null;
    this.clearDiagnostics();
    return created.id;
  }

  async refresh() {
    if (!this.patternId) return;
    const { view } = await this.api.getPattern(this.patternId);
    this.view = view;
    this.changed();
  }

  // -- op submission ---------------------------------------------------------

  private async submit(op: Record<string, unknown>,
                       anchor: Diagnostic["anchor"] = {}): Promise<boolean> {
    if (!this.patternId) throw new Error("no open pattern");
    const orderIssue = orderProblem(this.view, op.op as string);
    if (orderIssue) {
      this.diag("OrderViolation", orderIssue, op.op as string, anchor);
      return false;
    }
    const resp = await this.api.applyEdit(this.patternId, this.view.revision, op);
    if (resp.status === 409) {
      await this.refresh(); // reconcile and let the user retry
      this.diag("RevisionConflict", "pattern changed elsewhere; reloaded",
                op.op as string, anchor);
      return false;
    }
    if (resp.status !== 200) {
      await this.refresh(); // guarantee no phantom edits linger
      this.diag(resp.error ?? "EditRejected", resp.detail ?? "",
                op.op as string, anchor);
      return false;
    }
    if (resp.result) {
      this.view = applyPatch(this.view, resp.result.view_patch);
    } else {
      await this.refresh();
    }
    this.changed();
    return true;
  }

  // -- draw phase ---------------------------------------------------------------

  async drawPanel(points: Point[], name?: string): Promise<boolean> {
    const problem = outlineProblem(points);
    if (problem) {
      this.diag("InvalidOutline", problem, "add_panel",
                points.length ? { at: points[0] } : {});
      return false;
    }
    const op: Record<string, unknown> = { op: "add_panel", outline: points };
    if (name) op.name = name;
    return this.submit(op);
  }

  async renamePanel(panel: number, name: string) {
    return this.submit({ op: "rename_panel", panel, name });
  }

  async movePanel(panel: number, dx: number, dy: number) {
    return this.submit({ op: "move_panel", panel, dx, dy });
  }

  async flipPanel(panel: number) {
    return this.submit({ op: "flip_panel", panel });
  }

  async enterStitch() {
    return this.submit({ op: "enter_stitch" });
  }

  // -- stitch phase ----------------------------------------------------------------

  async insertBreak(panel: number, at: Point) {
    return this.submit({ op: "break", panel, point: at }, { panel, at });
  }

  /** Click two edges to seam them; mismatch surfaces before submission. */
  async clickEdge(panel: number, a: Point, b: Point): Promise<boolean> {
    const edge = { panel, a, b };
    if (!this.pendingEdge) {
      this.pendingEdge = edge;
      this.selection = { kind: "edge", panel, a, b };
      this.changed();
      return true;
    }
    const first = this.pendingEdge;
    this.pendingEdge = null;
    this.selection = { kind: "none" };
    const problem = stitchProblem(this.view, first, edge);
    if (problem) {
      this.diag("LengthMismatch", problem, "stitch", { panel, at: a });
      return false;
    }
    return this.submit(
      { op: "stitch", edge_a: first, edge_b: edge },
      { panel, at: a },
    );
  }

  async enterFeatures() {
    return this.submit({ op: "enter_features" });
  }

  // -- feature phase ---------------------------------------------------------------

  async gatherEdge(panel: number, a: Point, b: Point) {
    return this.submit(
      { op: "gather", edge: { panel, a, b } },
      { panel, at: a },
    );
  }

  async convertPleat(panel: number, cell: Point) {
    return this.submit(
      { op: "convert_pleat", panel, cell, direction: this.pleatDirection },
      { panel, at: cell },
    );
  }

  async insertPleat(panel: number, cell: Point) {
    return this.submit(
      { op: "insert_pleat", panel, cell, direction: this.pleatDirection },
      { panel, at: cell },
    );
  }

  async addDart(panel: number, anchor: Point) {
    const p = this.dartParams;
    return this.submit(
      {
        op: "dart",
        panel,
        anchor,
        orientation: p.orientation,
        width_cm: p.width_cm,
        height_units: p.height_units,
        style: p.style,
      },
      { panel, at: anchor },
    );
  }

  async undo() {
    if (!this.patternId) return;
    const resp = await this.api.undo(this.patternId, this.view.revision);
    if (resp.status === 200) {
      this.view = resp.view;
      this.assembly = null;
      this.changed();
    }
  }

  // -- assembly view -----------------------------------------------------------------

  async decompose(budgetS = 60) {
    if (!this.patternId) throw new Error("no open pattern");
    this.assembly = await this.api.decompose(this.patternId, {
      budget_s: budgetS,
    });
    this.currentView = "assembly";
    this.changed();
    return this.assembly;
  }

  async downloadSvg(sheetWidthCm: number): Promise<string> {
    if (!this.patternId) throw new Error("no open pattern");
    return this.api.exportSvg(this.patternId, sheetWidthCm);
  }

  async serializedFile(): Promise<string> {
    if (!this.patternId) throw new Error("no open pattern");
    return this.api.getPatternFile(this.patternId);
  }
}
