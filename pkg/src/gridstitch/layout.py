"""Fabrication export: cut pieces, shelf packing, SVG guides, instructions.

Physical units enter here. A module of side s cuts as a square of s + 2*δ;
the stitching line sits δ inside the cut edge and carries the connector
marks. Dart modules cut as rectangles of (2Δ - w/2) by h with one slanted
internal cut separating the two mirrored trapezoids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import PatternConfig, connector_positions
from .errors import PieceTooWide
from .pattern import Pattern

SVG_UNITS_PER_CM = 10.0  # 1 user unit = 1 mm


@dataclass
class CutPiece:
    """One fabric piece: a foundation/pleat square or a packed dart pair."""

    kind: str                  # square | pleat | dart_pair
    label: str
    width: float               # base size in cm, before allowance
    height: float
    count: int = 1
    dart_width: float = 0.0    # w, for dart pairs
    size_units: int = 0

    def cut_size(self, config: PatternConfig) -> tuple[float, float]:
        d = 2 * config.seam_allowance
        return self.width + d, self.height + d

    @property
    def area(self) -> float:
        return self.width * self.height


@dataclass
class PlacedPiece:
    piece: CutPiece
    x: float
    y: float
    rotated: bool = False

    def extent(self, config: PatternConfig) -> tuple[float, float]:
        w, h = self.piece.cut_size(config)
        return (h, w) if self.rotated else (w, h)


@dataclass
class CutLayout:
    sheet_width: float
    placed: list = field(default_factory=list)
    sheet_height: float = 0.0
    utilization: float = 0.0


def pieces_from_assembly(assembly, pattern: Pattern) -> list[CutPiece]:
    """Deduplicated cut list for an assembly, largest pieces first."""
    du = pattern.config.base_unit
    counts: dict = {}
    for pl in assembly.placements:
        if pl.role == "foundation":
            counts[("square", pl.size)] = counts.get(("square", pl.size), 0) + 1
        elif pl.role == "pleat":
            counts[("pleat", 1)] = counts.get(("pleat", 1), 0) + 1
    pieces = []
    for (kind, size), n in sorted(counts.items(), key=lambda kv: (-kv[0][1], kv[0][0])):
        pieces.append(CutPiece(
            kind="square" if kind == "square" else "pleat",
            label=f"{kind} {size}x{size}",
            width=size * du, height=size * du, count=n, size_units=size,
        ))
    dart_counts: dict = {}
    for f in pattern.features:
        if f.kind != "dart":
            continue
        w = f.params["width_cm"]
        h = f.params["height_units"] * du
        key = (w, h)
        dart_counts[key] = dart_counts.get(key, 0) + f.params.get("modules", 1)
    for (w, h), n in sorted(dart_counts.items()):
        pieces.append(CutPiece(
            kind="dart_pair",
            label=f"dart pair w={w:g} h={h:g}",
            width=2 * du - w / 2, height=h, count=n, dart_width=w,
        ))
    return pieces


def pack_layout(assembly, pattern: Pattern, sheet_width: float) -> CutLayout:
    """Shelf packing, tallest pieces first; deterministic."""
    config = pattern.config
    pieces = pieces_from_assembly(assembly, pattern)
    expanded: list[CutPiece] = []
    for p in pieces:
        expanded.extend([p] * p.count)

    def sort_key(p: CutPiece):
        w, h = p.cut_size(config)
        return (-h, -w, p.label)

    expanded.sort(key=sort_key)
    layout = CutLayout(sheet_width=sheet_width)
    shelf_y = 0.0
    shelf_h = 0.0
    cursor_x = 0.0
    for p in expanded:
        w, h = p.cut_size(config)
        rotated = False
        if w > sheet_width:
            if h > sheet_width:
                raise PieceTooWide(
                    f"{p.label} is {w:g} cm wide; sheet is {sheet_width:g} cm"
                )
            w, h, rotated = h, w, True
        if cursor_x + w > sheet_width + 1e-9:
            shelf_y += shelf_h
            cursor_x = 0.0
            shelf_h = 0.0
        layout.placed.append(PlacedPiece(piece=p, x=cursor_x, y=shelf_y,
                                         rotated=rotated))
        cursor_x += w
        shelf_h = max(shelf_h, h)
    layout.sheet_height = shelf_y + shelf_h
    used = sum(
        pl.extent(config)[0] * pl.extent(config)[1] for pl in layout.placed
    )
    total = layout.sheet_width * layout.sheet_height
    layout.utilization = used / total if total else 0.0
    return layout


# -- SVG rendering ---------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def _mark(x: float, y: float, horizontal: bool, tick: float) -> str:
    if horizontal:
        return (f'<line class="mark" x1="{_fmt(x)}" y1="{_fmt(y - tick)}" '
                f'x2="{_fmt(x)}" y2="{_fmt(y + tick)}"/>')
    return (f'<line class="mark" x1="{_fmt(x - tick)}" y1="{_fmt(y)}" '
            f'x2="{_fmt(x + tick)}" y2="{_fmt(y)}"/>')


def _square_piece_svg(piece: CutPiece, config: PatternConfig, u: float) -> list[str]:
    d = config.seam_allowance * u
    w, h = piece.cut_size(config)
    w *= u
    h *= u
    tick = 0.15 * config.base_unit * u / 4
    out = [f'<rect class="cut" x="0" y="0" width="{_fmt(w)}" height="{_fmt(h)}"/>']
    out.append(
        f'<rect class="stitch" x="{_fmt(d)}" y="{_fmt(d)}" '
        f'width="{_fmt(piece.width * u)}" height="{_fmt(piece.height * u)}"/>'
    )
    for off in connector_positions(piece.width, config):
        x = d + off * u
        out.append(_mark(x, d, True, tick))
        out.append(_mark(x, d + piece.height * u, True, tick))
    for off in connector_positions(piece.height, config):
        y = d + off * u
        out.append(_mark(d, y, False, tick))
        out.append(_mark(d + piece.width * u, y, False, tick))
    return out


def _dart_piece_svg(piece: CutPiece, config: PatternConfig, u: float) -> list[str]:
    du = config.base_unit
    d = config.seam_allowance * u
    w_rect, h_rect = piece.cut_size(config)
    w_rect *= u
    h_rect *= u
    wide = du * u                      # wide trapezoid base
    narrow = (du - piece.dart_width / 2) * u
    tick = 0.15 * du * u / 4
    out = [f'<rect class="cut" x="0" y="0" width="{_fmt(w_rect)}" '
           f'height="{_fmt(h_rect)}"/>']
    # internal slanted cut from (wide, 0) to (narrow, h): splits the rect
    # into a trapezoid and its reflection
    out.append(
        f'<line class="cut" x1="{_fmt(d + wide)}" y1="{_fmt(d)}" '
        f'x2="{_fmt(d + narrow)}" y2="{_fmt(d + piece.height * u)}"/>'
    )
    # connector marks on the wide bases and the outer legs
    for off in connector_positions(du, config):
        out.append(_mark(d + off * u, d, True, tick))
        right_edge_start = w_rect - 2 * d - du * u
        out.append(_mark(d + right_edge_start + off * u,
                         d + piece.height * u, True, tick))
    for off in connector_positions(piece.height, config):
        y = d + off * u
        out.append(_mark(d, y, False, tick))
        out.append(_mark(w_rect - d, y, False, tick))
    return out


def render_svg(layout: CutLayout, config: PatternConfig,
               revision: int | None = None) -> str:
    """One SVG document for the packed sheet; byte-stable for equal input."""
    u = SVG_UNITS_PER_CM
    width = layout.sheet_width * u
    height = max(layout.sheet_height * u, 1.0)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}mm" '
        f'height="{_fmt(height)}mm" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        "<style>"
        ".cut{stroke:#ff0000;fill:none;stroke-width:0.6}"
        ".stitch{stroke:#000000;fill:none;stroke-width:0.25;stroke-dasharray:2 2}"
        ".mark{stroke:#000000;stroke-width:0.5}"
        "</style>",
    ]
    if revision is not None:
        parts.append(f"<!-- pattern revision {revision} -->")
    for pl in layout.placed:
        transform = f"translate({_fmt(pl.x * u)} {_fmt(pl.y * u)})"
        if pl.rotated:
            h_cut = pl.piece.cut_size(config)[1] * u
            transform += f" rotate(90) translate(0 -{_fmt(h_cut)})"
        parts.append(f'<g transform="{transform}">')
        if pl.piece.kind == "dart_pair":
            parts.extend(_dart_piece_svg(pl.piece, config, u))
        else:
            parts.extend(_square_piece_svg(pl.piece, config, u))
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# -- assembly instructions ----------------------------------------------------------


PLEAT_DIRECTIVE = {
    "right": "connect left pins to right sockets (L+ -> R-)",
    "left": "connect right pins to left sockets (R+ -> L-)",
    "up": "connect bottom pins to top sockets (B+ -> T-)",
    "down": "connect top pins to bottom sockets (T+ -> B-)",
}


def assembly_instructions(pattern: Pattern, assembly) -> dict:
    """Structured build steps: manifest, seam joins, folds, dart closures."""
    manifest = []
    for pid in sorted(pattern.panels):
        panel = pattern.panels[pid]
        mods: dict = {}
        for pl in assembly.placements:
            if pl.panel_id != pid:
                continue
            key = (pl.role, pl.size)
            mods[key] = mods.get(key, 0) + 1
        manifest.append({
            "panel": pid,
            "name": panel.name,
            "modules": [
                {"role": role, "size": size, "count": n}
                for (role, size), n in sorted(mods.items())
            ],
        })

    joins = []
    for sid in sorted(pattern.seams):
        seam = pattern.seams[sid]
        a_ids = pattern.seam_side_ids(seam, "a")
        b_ids = pattern.seam_side_ids(seam, "b")
        short = min((a_ids, b_ids), key=len)
        doubled = sum(
            1 for s in short if len(pattern.segment_matches(s)) > 1
        )
        if doubled == 0:
            kind = "flat"
        elif doubled == len(short):
            kind = "gathered"
        else:
            kind = "partially gathered"
        step = {
            "seam": sid,
            "type": kind,
            "pairs": [list(pr) for pr in seam.pairs],
            "note": "either side may lie on top; the interface is bidirectional",
        }
        if doubled:
            step["note"] = ("pair two fasteners on the longer side with one "
                            "on the shorter; " + step["note"])
        joins.append(step)

    folds = []
    darts = []
    for f in pattern.features:
        if f.kind in ("pleat_convert", "pleat_insert"):
            folds.append({
                "panel": f.params["panel"],
                "cell": f.params["cell"],
                "direction": f.params["direction"],
                "directive": PLEAT_DIRECTIVE[f.params["direction"]],
            })
        elif f.kind == "dart":
            darts.append({
                "panel": f.params["panel"],
                "anchor": f.params["anchor"],
                "variant": f.params["variant"],
                "directive": "close the triangular gap by fastening the "
                             "slanted legs together",
            })
    return {"manifest": manifest, "seams": joins, "pleats": folds, "darts": darts}


def instructions_markdown(instr: dict) -> str:
    lines = ["# Assembly instructions", "", "## Module manifest"]
    for entry in instr["manifest"]:
        lines.append(f"- {entry['name']} (panel {entry['panel']}):")
        for m in entry["modules"]:
            size = f"{m['size']}x{m['size']}" if m["size"] else "pair"
            lines.append(f"    - {m['count']} {m['role']} {size}")
    lines += ["", "## Seams"]
    for j in instr["seams"]:
        lines.append(f"- seam {j['seam']}: {j['type']} join, "
                     f"{len(j['pairs'])} fastener pairings; {j['note']}")
    if instr["pleats"]:
        lines += ["", "## Pleats"]
        for f in instr["pleats"]:
            lines.append(f"- panel {f['panel']} cell {f['cell']}: "
                         f"fold {f['direction']}: {f['directive']}")
    if instr["darts"]:
        lines += ["", "## Darts"]
        for dd in instr["darts"]:
            lines.append(f"- panel {dd['panel']} at {dd['anchor']} "
                         f"({dd['variant']}): {dd['directive']}")
    return "\n".join(lines) + "\n"
