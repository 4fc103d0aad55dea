// Pattern and assembly rendering as SVG strings: pure functions so the
// views are testable without a DOM. One grid unit maps to UNIT px.

import {
  matchCounts,
  type AssemblyView,
  type Diagnostic,
  type PatternView,
  type Selection,
} from "./model.js";

export const UNIT = 32;

const SIZE_COLORS: Record<number, string> = {
  1: "#88ccee",
  2: "#44aa99",
  3: "#ddcc77",
  4: "#cc6677",
};

interface Box {
  minX: number;
  minY: number;
  maxX: number;
  maxY: number;
}

function bounds(view: PatternView): Box {
  const box: Box = { minX: 0, minY: 0, maxX: 1, maxY: 1 };
  let first = true;
  for (const panel of Object.values(view.panels)) {
    for (const [x, y] of panel.outline) {
      if (first) {
        Object.assign(box, { minX: x, minY: y, maxX: x, maxY: y });
        first = false;
      }
      box.minX = Math.min(box.minX, x);
      box.minY = Math.min(box.minY, y);
      box.maxX = Math.max(box.maxX, x);
      box.maxY = Math.max(box.maxY, y);
    }
  }
  return { minX: box.minX - 1, minY: box.minY - 1,
           maxX: box.maxX + 1, maxY: box.maxY + 1 };
}

// grid y points up; screen y points down
function tx(box: Box, x: number): number {
  return (x - box.minX) * UNIT;
}

function ty(box: Box, y: number): number {
  return (box.maxY - y) * UNIT;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderPattern(
  view: PatternView,
  selection: Selection,
  diagnostics: Diagnostic[],
): string {
  const box = bounds(view);
  const w = (box.maxX - box.minX) * UNIT;
  const h = (box.maxY - box.minY) * UNIT;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${w} ${h}" ` +
      `width="${w}" height="${h}" class="pattern-view" data-phase="${view.phase}">`,
  ];
  parts.push(gridLines(box));
  const counts = matchCounts(view);

  for (const [pid, panel] of Object.entries(view.panels)) {
    parts.push(`<g class="panel" data-panel="${pid}">`);
    for (const [i, j, kind, dir] of panel.cells) {
      const cls = kind === "foundation" ? "cell" : `cell cell-${kind}`;
      parts.push(
        `<rect class="${cls}" data-cell="${i},${j}" x="${tx(box, i)}" ` +
          `y="${ty(box, j + 1)}" width="${UNIT}" height="${UNIT}"/>`,
      );
      if (kind === "pleat") {
        parts.push(
          `<text class="pleat-dir" x="${tx(box, i) + UNIT / 2}" ` +
            `y="${ty(box, j) - UNIT / 2 + 5}" text-anchor="middle">` +
            `${{ left: "&#8592;", right: "&#8594;", up: "&#8593;", down: "&#8595;" }[dir] ?? ""}</text>`,
        );
      }
    }
    const pts = panel.outline
      .map(([x, y]) => `${tx(box, x)},${ty(box, y)}`)
      .join(" ");
    parts.push(`<polygon class="outline" points="${pts}"/>`);
    const label = panel.outline[0];
    parts.push(
      `<text class="panel-name" x="${tx(box, label[0]) + 4}" ` +
        `y="${ty(box, label[1]) + 14}">${esc(panel.name)}</text>`,
    );
    parts.push("</g>");
  }

  const gatheredSelected = selectionTouchesGatheredSeam(view, selection, counts);
  for (const [eid, edge] of Object.entries(view.edges)) {
    for (const seg of edge.segments) {
      const cls = !seg.active
        ? `segment seg-inactive seg-${seg.reason}`
        : edge.seam
          ? (counts.get(seg.id) ?? 0) > 1
            ? "segment seg-gathered"
            : "segment seg-seamed"
          : "segment seg-free";
      parts.push(
        `<line class="${cls}" data-edge="${eid}" data-segment="${seg.id}" ` +
          `x1="${tx(box, seg.a[0])}" y1="${ty(box, seg.a[1])}" ` +
          `x2="${tx(box, seg.b[0])}" y2="${ty(box, seg.b[1])}"/>`,
      );
      if (gatheredSelected && edge.seam) {
        const mx = (tx(box, seg.a[0]) + tx(box, seg.b[0])) / 2;
        const my = (ty(box, seg.a[1]) + ty(box, seg.b[1])) / 2;
        parts.push(`<circle class="half-unit-guide" cx="${mx}" cy="${my}" r="2"/>`);
      }
    }
  }

  parts.push(seamLinks(view, box));

  if (selection.kind === "edge") {
    parts.push(
      `<line class="selection" x1="${tx(box, selection.a[0])}" ` +
        `y1="${ty(box, selection.a[1])}" x2="${tx(box, selection.b[0])}" ` +
        `y2="${ty(box, selection.b[1])}"/>`,
    );
  } else if (selection.kind === "cell") {
    parts.push(
      `<rect class="selection" x="${tx(box, selection.at[0])}" ` +
        `y="${ty(box, selection.at[1] + 1)}" width="${UNIT}" height="${UNIT}"/>`,
    );
  }

  for (const d of diagnostics) {
    const at = d.anchor.at ?? [box.minX + 1, box.maxY - 1];
    parts.push(
      `<g class="diagnostic" data-reason="${esc(d.reason)}">` +
        `<circle cx="${tx(box, at[0])}" cy="${ty(box, at[1])}" r="9"/>` +
        `<text x="${tx(box, at[0]) + 12}" y="${ty(box, at[1]) + 4}">` +
        `${esc(d.reason)}: ${esc(d.detail)}</text></g>`,
    );
  }

  parts.push("</svg>");
  return parts.join("\n");
}

function gridLines(box: Box): string {
  const out: string[] = ['<g class="grid">'];
  for (let x = box.minX; x <= box.maxX; x++) {
    out.push(
      `<line x1="${tx(box, x)}" y1="0" x2="${tx(box, x)}" ` +
        `y2="${(box.maxY - box.minY) * UNIT}"/>`,
    );
  }
  for (let y = box.minY; y <= box.maxY; y++) {
    out.push(
      `<line x1="0" y1="${ty(box, y)}" x2="${(box.maxX - box.minX) * UNIT}" ` +
        `y2="${ty(box, y)}"/>`,
    );
  }
  out.push("</g>");
  return out.join("");
}

function seamLinks(view: PatternView, box: Box): string {
  const segPos = new Map<number, [number, number]>();
  for (const edge of Object.values(view.edges)) {
    for (const seg of edge.segments) {
      segPos.set(seg.id, [
        (tx(box, seg.a[0]) + tx(box, seg.b[0])) / 2,
        (ty(box, seg.a[1]) + ty(box, seg.b[1])) / 2,
      ]);
    }
  }
  const out: string[] = ['<g class="seam-links">'];
  for (const [sid, seam] of Object.entries(view.seams)) {
    for (const [a, b] of seam.pairs) {
      const pa = segPos.get(a);
      const pb = segPos.get(b);
      if (!pa || !pb) continue;
      out.push(
        `<line class="seam-link" data-seam="${sid}" x1="${pa[0]}" ` +
          `y1="${pa[1]}" x2="${pb[0]}" y2="${pb[1]}"/>`,
      );
    }
  }
  out.push("</g>");
  return out.join("");
}

function selectionTouchesGatheredSeam(
  view: PatternView,
  selection: Selection,
  counts: Map<number, number>,
): boolean {
  if (selection.kind !== "edge") return false;
  for (const edge of Object.values(view.edges)) {
    if (edge.panel !== selection.panel) continue;
    const matches =
      (edge.start[0] === selection.a[0] && edge.start[1] === selection.a[1]) ||
      (edge.end[0] === selection.a[0] && edge.end[1] === selection.a[1]);
    if (!matches || !edge.seam) continue;
    if (edge.segments.some((s) => (counts.get(s.id) ?? 0) > 1)) return true;
    const seam = view.seams[String(edge.seam)];
    if (seam?.pairs.some(([a, b]) => (counts.get(a) ?? 0) > 1 || (counts.get(b) ?? 0) > 1)) {
      return true;
    }
  }
  return false;
}

/** Assembly overlay: module placements colored by size, manifest legend. */
export function renderAssembly(view: PatternView, assembly: AssemblyView): string {
  const box = bounds(view);
  const w = (box.maxX - box.minX) * UNIT;
  const h = (box.maxY - box.minY) * UNIT;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${w} ${h}" ` +
      `width="${w}" height="${h}" class="assembly-view" ` +
      `data-modules="${assembly.module_count}">`,
  ];
  for (const pl of assembly.placements) {
    const color =
      pl.role === "pleat"
        ? "#aa4499"
        : pl.role === "dart_pair"
          ? "#882255"
          : (SIZE_COLORS[pl.size] ?? "#cccccc");
    if (pl.role === "foundation") {
      const [i, j] = pl.at;
      parts.push(
        `<rect class="module module-${pl.size}" data-role="${pl.role}" ` +
          `x="${tx(box, i)}" y="${ty(box, j + pl.size)}" ` +
          `width="${pl.size * UNIT}" height="${pl.size * UNIT}" ` +
          `fill="${color}"/>`,
      );
    } else {
      for (const [i, j] of pl.cells) {
        parts.push(
          `<rect class="module module-${pl.role}" data-role="${pl.role}" ` +
            `x="${tx(box, i)}" y="${ty(box, j + 1)}" width="${UNIT}" ` +
            `height="${UNIT}" fill="${color}"/>`,
        );
      }
    }
  }
  for (const panel of Object.values(view.panels)) {
    const pts = panel.outline
      .map(([x, y]) => `${tx(box, x)},${ty(box, y)}`)
      .join(" ");
    parts.push(`<polygon class="outline" points="${pts}"/>`);
  }
  parts.push("</svg>");
  return parts.join("\n");
}

/** Manifest list for the assembly side panel. */
export function manifestLines(assembly: AssemblyView): string[] {
  const byKey = new Map<string, number>();
  for (const pl of assembly.placements) {
    const key =
      pl.role === "foundation" ? `${pl.size}x${pl.size} foundation` : pl.role;
    byKey.set(key, (byKey.get(key) ?? 0) + 1);
  }
  const lines = [...byKey.entries()]
    .sort()
    .map(([k, n]) => `${n} × ${k}`);
  lines.push(`${assembly.module_count} modules total`);
  return lines;
}
