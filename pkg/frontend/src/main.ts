// Browser shell: wires the controller to the DOM. All engine behavior lives
// behind the controller so it stays testable without a browser.

import { Api } from "./api.js";
import { EditorController } from "./editor.js";
import { manifestLines, renderAssembly, renderPattern, UNIT } from "./svgview.js";
import { snapToGrid } from "./validate.js";
import type { Point } from "./model.js";

const API_BASE =
  new URLSearchParams(location.search).get("api") ?? "http://127.0.0.1:8777";

const controller = new EditorController(new Api(API_BASE));

const stage = document.getElementById("stage")!;
const sidebar = document.getElementById("sidebar")!;
const toolbar = document.getElementById("toolbar")!;
const statusLine = document.getElementById("status")!;

let drawing: Point[] = [];
let tool = "select";

function setStatus(text: string) {
  statusLine.textContent = text;
}

function phaseLabel(): string {
  const names: Record<string, string> = {
    draw: "1 · Draw",
    stitch: "1 · Stitch",
    features: "2 · Features",
  };
  return names[controller.view.phase] ?? controller.view.phase;
}

function render() {
  const v = controller.view;
  if (controller.currentView === "assembly" && controller.assembly) {
    stage.innerHTML = renderAssembly(v, controller.assembly);
    sidebar.innerHTML =
      "<h3>Module manifest</h3><ul>" +
      manifestLines(controller.assembly)
        .map((l) => `<li>${l}</li>`)
        .join("") +
      "</ul>";
  } else {
    stage.innerHTML = renderPattern(v, controller.selection, controller.diagnostics);
    sidebar.innerHTML = diagnosticsHtml();
    overlayDrawing();
  }
  document.getElementById("phase")!.textContent = phaseLabel();
  renderToolbar();
}

function diagnosticsHtml(): string {
  if (!controller.diagnostics.length) return "<h3>No problems</h3>";
  return (
    "<h3>Problems</h3><ul class='diag'>" +
    controller.diagnostics
      .map((d) => `<li><b>${d.reason}</b> ${d.detail}</li>`)
      .join("") +
    "</ul>"
  );
}

function overlayDrawing() {
  const svg = stage.querySelector("svg");
  if (!svg || drawing.length === 0) return;
  const pts = drawing.map((p) => toScreen(p)).map(([x, y]) => `${x},${y}`);
  const poly = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
  poly.setAttribute("points", pts.join(" "));
  poly.setAttribute("class", "draft");
  svg.appendChild(poly);
}

function viewBounds() {
  let minX = 0, minY = 0, maxY = 1;
  let first = true;
  for (const panel of Object.values(controller.view.panels)) {
    for (const [x, y] of panel.outline) {
      if (first) {
        minX = x; minY = y; maxY = y; first = false;
      }
      minX = Math.min(minX, x);
      minY = Math.min(minY, y);
      maxY = Math.max(maxY, y);
    }
  }
  return { minX: minX - 1, minY: minY - 1, maxY: maxY + 1 };
}

function toScreen([x, y]: Point): [number, number] {
  const b = viewBounds();
  return [(x - b.minX) * UNIT, (b.maxY - y) * UNIT];
}

function fromScreen(px: number, py: number): Point {
  const b = viewBounds();
  return snapToGrid(px / UNIT + b.minX, b.maxY - py / UNIT);
}

function button(label: string, onClick: () => void, active = false): HTMLElement {
  const el = document.createElement("button");
  el.textContent = label;
  if (active) el.classList.add("active");
  el.addEventListener("click", onClick);
  return el;
}

function renderToolbar() {
  toolbar.innerHTML = "";
  const v = controller.view;
  toolbar.append(
    button("New", () => run(async () => {
      await controller.newPattern();
      drawing = [];
    })),
    button("Templates…", pickTemplate),
    button("Undo", () => run(() => controller.undo())),
  );
  if (v.phase === "draw") {
    toolbar.append(
      button("Draw panel", () => {
        tool = "draw";
        drawing = [];
        setStatus("click grid points; click the first point again to close");
        render();
      }, tool === "draw"),
      button("To stitching", () => run(() => controller.enterStitch())),
    );
  } else if (v.phase === "stitch") {
    toolbar.append(
      button("Stitch edges", () => { tool = "stitch"; setStatus("click two edges of equal length"); render(); }, tool === "stitch"),
      button("Break point", () => { tool = "break"; setStatus("click a grid point on an edge"); render(); }, tool === "break"),
      button("To features", () => run(() => controller.enterFeatures())),
    );
  } else {
    toolbar.append(
      button("Gather", () => { tool = "gather"; setStatus("click a seamed edge"); render(); }, tool === "gather"),
      button("Convert pleat", () => { tool = "pleat-convert"; setStatus("click a cell"); render(); }, tool === "pleat-convert"),
      button("Insert pleat", () => { tool = "pleat-insert"; setStatus("click a cell"); render(); }, tool === "pleat-insert"),
      dirSelect(),
      button("Dart", () => { tool = "dart"; setStatus("click a grid point"); render(); }, tool === "dart"),
      dartSelect(),
      button("Assemble", () => run(async () => {
        await controller.decompose();
        setStatus(`${controller.assembly?.module_count} modules`);
      })),
    );
  }
  if (controller.currentView === "assembly") {
    toolbar.append(
      button("Back to pattern", () => { controller.currentView = "pattern"; render(); }),
      button("Download SVG", () => run(downloadSvg)),
    );
  }
}

function dirSelect(): HTMLElement {
  const sel = document.createElement("select");
  for (const d of ["right", "left", "up", "down"]) {
    const opt = document.createElement("option");
    opt.value = d;
    opt.textContent = `fold ${d}`;
    if (d === controller.pleatDirection) opt.selected = true;
    sel.append(opt);
  }
  sel.addEventListener("change", () => {
    controller.pleatDirection = sel.value as typeof controller.pleatDirection;
  });
  return sel;
}

function dartSelect(): HTMLElement {
  const sel = document.createElement("select");
  const options: [string, Partial<typeof controller.dartParams>][] = [
    ["dart v w=Δ h=2Δ", { orientation: "v", width_cm: 8, height_units: 2 }],
    ["dart v w=Δ h=3Δ", { orientation: "v", width_cm: 8, height_units: 3 }],
    ["dart h w=Δ h=2Δ", { orientation: "h", width_cm: 8, height_units: 2 }],
    ["dart v w=Δ/2 h=2Δ", { orientation: "v", width_cm: 4, height_units: 2 }],
  ];
  options.forEach(([label, params], k) => {
    const opt = document.createElement("option");
    opt.value = String(k);
    opt.textContent = label;
    sel.append(opt);
  });
  sel.addEventListener("change", () => {
    Object.assign(controller.dartParams, options[Number(sel.value)][1]);
  });
  return sel;
}

async function pickTemplate() {
  const names = (await controller.api.templates()).map((t) => t.id);
  const name = prompt(`template? (${names.join(", ")})`, "compound-skirt");
  if (!name) return;
  const resize = confirm("open phase 1 only, to redraw at new dimensions?");
  await run(() => controller.openTemplate(name, resize));
}

async function downloadSvg() {
  const svg = await controller.downloadSvg(80);
  const blob = new Blob([svg], { type: "image/svg+xml" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "cutting-guide.svg";
  a.click();
  URL.revokeObjectURL(a.href);
}

async function run(fn: () => Promise<unknown>) {
  try {
    await fn();
  } catch (err) {
    setStatus(String(err));
  }
  render();
}

function nearestEdge(at: Point): { panel: number; a: Point; b: Point } | null {
  for (const edge of Object.values(controller.view.edges)) {
    const [ax, ay] = edge.start;
    const [bx, by] = edge.end;
    if (ax === bx && at[0] === ax
        && Math.min(ay, by) <= at[1] && at[1] <= Math.max(ay, by)) {
      return { panel: edge.panel, a: edge.start, b: edge.end };
    }
    if (ay === by && at[1] === ay
        && Math.min(ax, bx) <= at[0] && at[0] <= Math.max(ax, bx)) {
      return { panel: edge.panel, a: edge.start, b: edge.end };
    }
  }
  return null;
}

function panelAtCell(at: Point): number | null {
  for (const [pid, panel] of Object.entries(controller.view.panels)) {
    if (panel.cells.some(([i, j]) => i === at[0] && j === at[1])) {
      return Number(pid);
    }
  }
  return null;
}

function panelAtPoint(at: Point): number | null {
  for (const [pid, panel] of Object.entries(controller.view.panels)) {
    if (
      panel.cells.some(
        ([i, j]) => at[0] >= i && at[0] <= i + 1 && at[1] >= j && at[1] <= j + 1,
      )
    ) {
      return Number(pid);
    }
  }
  return null;
}

stage.addEventListener("click", (ev) => {
  const svg = stage.querySelector("svg");
  if (!svg) return;
  const rect = svg.getBoundingClientRect();
  const at = fromScreen(ev.clientX - rect.left, ev.clientY - rect.top);
  const cell: Point = [
    Math.floor(ev.clientX - rect.left) >= 0
      ? Math.floor((ev.clientX - rect.left) / UNIT) + viewBounds().minX
      : 0,
    viewBounds().maxY - 1 - Math.floor((ev.clientY - rect.top) / UNIT),
  ];
  controller.clearDiagnostics();
  if (tool === "draw") {
    if (drawing.length >= 3 && at[0] === drawing[0][0] && at[1] === drawing[0][1]) {
      const pts = drawing;
      drawing = [];
      tool = "select";
      void run(() => controller.drawPanel(pts));
    } else {
      drawing.push(at);
      render();
    }
    return;
  }
  if (tool === "break") {
    const panel = panelAtPoint(at);
    if (panel !== null) void run(() => controller.insertBreak(panel, at));
    return;
  }
  if (tool === "stitch" || tool === "gather") {
    const edge = nearestEdge(at);
    if (!edge) return;
    if (tool === "stitch") void run(() => controller.clickEdge(edge.panel, edge.a, edge.b));
    else void run(() => controller.gatherEdge(edge.panel, edge.a, edge.b));
    return;
  }
  if (tool === "pleat-convert" || tool === "pleat-insert") {
    const panel = panelAtCell(cell);
    if (panel === null) return;
    if (tool === "pleat-convert") void run(() => controller.convertPleat(panel, cell));
    else void run(() => controller.insertPleat(panel, cell));
    return;
  }
  if (tool === "dart") {
    const panel = panelAtPoint(at);
    if (panel !== null) void run(() => controller.addDart(panel, at));
  }
});

controller.onChange(render);
void run(() => controller.newPattern());
