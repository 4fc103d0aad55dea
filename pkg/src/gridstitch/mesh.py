"""Simulation mesh export: placed panels, triangulations, sewing threads.

Panels triangulate on a regular lattice at the requested spacing; pleat
cells and dart wedges become holes, and the dart modules' trapezoid fabric
is strip-meshed against the lattice so the wedge legs get matched vertices.
Threads are spring edges between corresponding boundary vertices: seam
pairs at full resolution, gathers at the half-unit level with self-matched
remainders, pleat fold edges, and dart legs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DegeneratePanel, MissingAlignment, ResolutionMismatch
from .pattern import DART_HOLE, FOUNDATION, PLEAT, Pattern

FRONT_DEPTH_M = 0.2
BACK_DEPTH_M = -0.2

FABRIC_PARAMS = {
    "areal_density_kg_m2": 0.6,
    "stiffness_tension": 3,
    "stiffness_compression": 3,
    "stiffness_shear": 3,
    "stiffness_bending": 3,
    "solver_substeps": 7,
    "frames": 100,
}


def _key(x: float, y: float):
    return (round(x, 6), round(y, 6))


@dataclass
class PanelMesh:
    panel_id: int
    name: str
    spacing: float
    vertices: list = field(default_factory=list)   # (x_cm, y_cm) panel-local
    triangles: list = field(default_factory=list)
    index: dict = field(default_factory=dict)      # _key -> vertex id
    offset: tuple = (0.0, 0.0)                     # alignment, cm
    depth: float = FRONT_DEPTH_M

    def vertex(self, x: float, y: float) -> int:
        k = _key(x, y)
        vid = self.index.get(k)
        if vid is None:
            vid = len(self.vertices)
            self.vertices.append((x, y))
            self.index[k] = vid
        return vid

    def lookup(self, x: float, y: float):
        return self.index.get(_key(x, y))

    def positions_3d(self):
        ox, oy = self.offset
        return [
            ((x + ox) / 100.0, (y + oy) / 100.0, self.depth)
            for x, y in self.vertices
        ]


@dataclass
class Thread:
    mesh_a: int
    vid_a: int
    mesh_b: int
    vid_b: int
    tag: str  # seam | gather-fold | pleat-fold | dart-close


@dataclass
class MeshBundle:
    meshes: dict
    threads: list
    spacing: float
    fabric: dict = field(default_factory=lambda: dict(FABRIC_PARAMS))


# -- panel placement -------------------------------------------------------------


def place_panels(pattern: Pattern, offsets: dict) -> dict:
    """Alignment offsets (cm) per panel id; outside-up panels sit in the
    front plane, inside-up behind."""
    placed = {}
    for pid in sorted(pattern.panels):
        if pid not in offsets:
            raise MissingAlignment(f"no alignment offset for panel {pid}")
        panel = pattern.panels[pid]
        depth = FRONT_DEPTH_M if panel.face_up == "outside" else BACK_DEPTH_M
        placed[pid] = {"offset": tuple(offsets[pid]), "depth": depth}
    return placed


# -- triangulation ---------------------------------------------------------------


def _chain(y0: float, y1: float, spacing: float) -> list[float]:
    n = max(1, round((y1 - y0) / spacing))
    return [y0 + (y1 - y0) * k / n for k in range(n + 1)]


def _grid_cell(mesh: PanelMesh, cell, du: float, spacing: float) -> None:
    i, j = cell
    nx = max(1, round(du / spacing))
    xs = [i * du + du * k / nx for k in range(nx + 1)]
    ys = [j * du + du * k / nx for k in range(nx + 1)]
    for a in range(nx):
        for b in range(nx):
            v00 = mesh.vertex(xs[a], ys[b])
            v10 = mesh.vertex(xs[a + 1], ys[b])
            v01 = mesh.vertex(xs[a], ys[b + 1])
            v11 = mesh.vertex(xs[a + 1], ys[b + 1])
            mesh.triangles.append((v00, v10, v11))
            mesh.triangles.append((v00, v11, v01))


def _sample_leg(p_base, p_apex, spacing):
    length = math.dist(p_base, p_apex)
    n = max(1, round(length / spacing))
    return [
        (p_base[0] + (p_apex[0] - p_base[0]) * k / n,
         p_base[1] + (p_apex[1] - p_base[1]) * k / n)
        for k in range(n + 1)
    ]


class _Frame:
    """Maps a local wedge frame (base on +y) onto panel coordinates."""

    def __init__(self, rect_cm, orientation: str, base: str):
        self.rect = rect_cm
        x0, y0, x1, y1 = rect_cm
        if orientation == "v":
            self.flip_y = base == "bottom"
        else:
            self.flip_y = base == "left"
        self.orientation = orientation

    def to_panel(self, p):
        x, y = p
        x0, y0, x1, y1 = self.rect
        if self.orientation == "v":
            if self.flip_y:
                y = y0 + y1 - y
            return (x, y)
        # horizontal: local x runs along panel y, local y along panel x
        lx0, ly0, lx1, ly1 = y0, x0, y1, x1
        if self.flip_y:
            y = ly0 + ly1 - y
        return (y, x)


def _local_rect(rect_cm, orientation):
    x0, y0, x1, y1 = rect_cm
    if orientation == "v":
        return rect_cm
    return (y0, x0, y1, x1)


def _mesh_wedge_piece(mesh: PanelMesh, piece: dict, du: float, w: float,
                      spacing: float):
    """Strip-mesh the fabric around a (half) wedge or (half) diamond.

    Returns the sampled legs, base-to-apex, in panel coordinates.
    """
    x0, y0, x1, y1 = [c * du for c in piece["rect"]]
    orientation = piece["orientation"]
    kind = piece["kind"]
    legs = []

    if kind in ("wedge", "half_wedge"):
        base = piece["base"]
        frame = _Frame((x0, y0, x1, y1), orientation, base)
        lx0, ly0, lx1, ly1 = _local_rect((x0, y0, x1, y1), orientation)
        if kind == "wedge":
            cx = (lx0 + lx1) / 2
            halves = [(lx0, cx, cx - w / 2, -1), (cx, lx1, cx + w / 2, +1)]
        else:
            # half wedge: the open side holds the apex-bearing vertical
            open_side = piece["open"]
            if orientation == "v":
                open_right = open_side == "right"
            else:
                open_right = open_side == "up"
            if open_right:
                halves = [(lx0, lx1, lx1 - w / 2, -1)]
            else:
                halves = [(lx0, lx1, lx0 + w / 2, +1)]
        for hx0, hx1, flat_limit, sign in halves:
            apex_x = hx1 if sign < 0 else hx0
            top_at = _make_top(hx0, hx1, flat_limit, apex_x, ly0, ly1, sign)
            leg_local = _sample_leg((flat_limit, ly1), (apex_x, ly0), spacing)
            extra = [p[0] for p in leg_local]
            _strip_mesh(mesh, frame, hx0, hx1, ly0, ly1, top_at, spacing, extra)
            legs.append([frame.to_panel(p) for p in leg_local])
    else:
        # diamond or half diamond: waist at mid-height, apexes on both ends
        frame = _Frame((x0, y0, x1, y1), orientation, "top")
        lx0, ly0, lx1, ly1 = _local_rect((x0, y0, x1, y1), orientation)
        mid = (ly0 + ly1) / 2
        if kind == "diamond":
            cx = (lx0 + lx1) / 2
            quads = [
                (lx0, cx, cx - w / 2, -1, ly0, mid, "low"),
                (cx, lx1, cx + w / 2, +1, ly0, mid, "low"),
                (lx0, cx, cx - w / 2, -1, mid, ly1, "high"),
                (cx, lx1, cx + w / 2, +1, mid, ly1, "high"),
            ]
        else:
            open_side = piece["open"]
            if orientation == "v":
                open_right = open_side == "right"
            else:
                open_right = open_side == "up"
            if open_right:
                quads = [(lx0, lx1, lx1 - w / 2, -1, ly0, mid, "low"),
                         (lx0, lx1, lx1 - w / 2, -1, mid, ly1, "high")]
            else:
                quads = [(lx0, lx1, lx0 + w / 2, +1, ly0, mid, "low"),
                         (lx0, lx1, lx0 + w / 2, +1, mid, ly1, "high")]
        for hx0, hx1, waist_x, sign, qy0, qy1, half in quads:
            apex_x = hx1 if sign < 0 else hx0
            if half == "low":
                # apex at the low end, waist at qy1
                top_at = _make_top(hx0, hx1, waist_x, apex_x, qy0, qy1, sign)
                leg_local = _sample_leg((waist_x, qy1), (apex_x, qy0), spacing)
                extra = [p[0] for p in leg_local]
                _strip_mesh(mesh, frame, hx0, hx1, qy0, qy1, top_at, spacing,
                            extra)
            else:
                # mirrored: apex at the high end, waist at qy0
                bottom_at = _make_top(hx0, hx1, waist_x, apex_x, qy0, qy1, sign)
                leg_local = _sample_leg((waist_x, qy0), (apex_x, qy1), spacing)
                extra = [p[0] for p in leg_local]
                _strip_mesh_lower(mesh, frame, hx0, hx1, qy0, qy1,
                                  bottom_at, spacing, extra)
            legs.append([frame.to_panel(p) for p in leg_local])
    return legs


def _make_top(hx0, hx1, flat_limit, apex_x, y_lo, y_hi, sign):
    """Upper fabric boundary across [hx0, hx1]: flat at y_hi until the slant."""
    def top_at(x):
        if sign < 0:
            if x <= flat_limit + 1e-9:
                return y_hi
            t = (x - flat_limit) / max(apex_x - flat_limit, 1e-9)
        else:
            if x >= flat_limit - 1e-9:
                return y_hi
            t = (flat_limit - x) / max(flat_limit - apex_x, 1e-9)
        return y_hi - t * (y_hi - y_lo)
    return top_at


def _column_positions(hx0, hx1, extra, spacing):
    xs = set()
    n = max(1, round((hx1 - hx0) / spacing))
    for k in range(n + 1):
        xs.add(round(hx0 + (hx1 - hx0) * k / n, 6))
    for x in extra:
        if hx0 - 1e-9 < x < hx1 + 1e-9:
            xs.add(round(x, 6))
    return sorted(xs)


def _strip_mesh(mesh, frame, hx0, hx1, y_lo, y_hi, top_at, spacing, extra=()):
    xs = _column_positions(hx0, hx1, extra, spacing)
    prev = None
    for x in xs:
        top = top_at(x)
        chain = [] if top <= y_lo + 1e-9 else _chain(y_lo, top, spacing)
        cur = (x, chain)
        if prev is not None and prev[1] and chain:
            _mesh_column_pair_frame(mesh, frame, prev[0], x, prev[1], chain)
        prev = cur


def _strip_mesh_lower(mesh, frame, hx0, hx1, y_lo, y_hi, bottom_at, spacing,
                      extra=()):
    # mirrored strip: fabric between a slanted lower boundary and y_hi
    xs = _column_positions(hx0, hx1, extra, spacing)
    prev = None
    for x in xs:
        bot = y_lo + (y_hi - bottom_at(x))
        chain = [] if bot >= y_hi - 1e-9 else _chain(bot, y_hi, spacing)
        cur = (x, chain)
        if prev is not None and prev[1] and chain:
            _mesh_column_pair_frame(mesh, frame, prev[0], x, prev[1], chain)
        prev = cur


def _mesh_column_pair_frame(mesh, frame, xa, xb, chain_a, chain_b):
    a = [mesh.vertex(*frame.to_panel((xa, y))) for y in chain_a]
    b = [mesh.vertex(*frame.to_panel((xb, y))) for y in chain_b]
    i = j = 0
    while i < len(a) - 1 or j < len(b) - 1:
        adv_a = i < len(a) - 1 and (
            j >= len(b) - 1 or chain_a[i + 1] <= chain_b[j + 1] + 1e-9
        )
        if adv_a:
            mesh.triangles.append((a[i], b[j], a[i + 1]))
            i += 1
        else:
            mesh.triangles.append((a[i], b[j], b[j + 1]))
            j += 1


def triangulate(pattern: Pattern, panel_id: int, spacing: float = 1.0) -> PanelMesh:
    """Lattice triangulation of one panel with feature cut-outs.

    Boundary edges subdivide at `spacing`; no triangle edge exceeds twice
    that. Pleat cells are holes. Dart footprints are re-meshed from their
    trapezoid fabric so the wedge legs carry matched vertex chains.
    """
    if spacing <= 0:
        raise DegeneratePanel("spacing must be positive")
    panel = pattern.panel(panel_id)
    if not panel.cells:
        raise DegeneratePanel(f"panel {panel_id} has no cells")
    du = pattern.config.base_unit
    mesh = PanelMesh(panel_id=panel_id, name=panel.name, spacing=spacing)
    dart_cells = {c for c, d in panel.cells.items() if d.kind == DART_HOLE}
    for cell in sorted(panel.cells):
        data = panel.cells[cell]
        if data.kind == PLEAT or cell in dart_cells:
            continue
        _grid_cell(mesh, cell, du, spacing)
    for f in pattern.features:
        if f.kind != "dart":
            continue
        for piece in f.params.get("pieces", []):
            if piece["panel"] != panel_id:
                continue
            _mesh_wedge_piece(mesh, piece, du, f.params["width_cm"], spacing)
    if not mesh.triangles:
        raise DegeneratePanel(f"panel {panel_id} triangulated to nothing")
    return mesh


# -- threads ------------------------------------------------------------------------


def _segment_points(seg, spacing, du, reverse=False):
    ax, ay = seg.a[0] * du, seg.a[1] * du
    bx, by = seg.b[0] * du, seg.b[1] * du
    n = max(1, round(du / spacing))
    pts = [
        (ax + (bx - ax) * k / n, ay + (by - ay) * k / n) for k in range(n + 1)
    ]
    return pts[::-1] if reverse else pts


def _half_points(pts, half):
    mid = len(pts) // 2
    return pts[: mid + 1] if half == 0 else pts[mid:]


def _emit_pairs(threads, mesh_a, mesh_b, pts_a, pts_b, tag):
    if len(pts_a) != len(pts_b):
        raise ResolutionMismatch(
            f"thread chains differ: {len(pts_a)} vs {len(pts_b)} vertices"
        )
    for pa, pb in zip(pts_a, pts_b):
        va = mesh_a.lookup(*pa)
        vb = mesh_b.lookup(*pb)
        if va is None or vb is None:
            continue  # fabric consumed by a feature on one side
        threads.append(Thread(mesh_a.panel_id, va, mesh_b.panel_id, vb, tag))


def _emit_self_fold(threads, mesh, pts, tag):
    n = len(pts)
    for k in range(n // 2):
        va = mesh.lookup(*pts[k])
        vb = mesh.lookup(*pts[n - 1 - k])
        if va is None or vb is None or va == vb:
            continue
        threads.append(Thread(mesh.panel_id, va, mesh.panel_id, vb, tag))


def generate_threads(pattern: Pattern, meshes: dict, spacing: float = 1.0):
    """Sewing threads for seams, gathers, pleat folds, and dart closures."""
    du = pattern.config.base_unit
    threads: list[Thread] = []

    for sid in sorted(pattern.seams):
        seam = pattern.seams[sid]
        a_ids = pattern.seam_side_ids(seam, "a")
        b_counts: dict = {}
        a_counts: dict = {}
        for sa, sb in seam.pairs:
            a_counts[sa] = a_counts.get(sa, 0) + 1
            b_counts[sb] = b_counts.get(sb, 0) + 1
        for sa, sb in seam.pairs:
            seg_a = pattern.segments[sa]
            seg_b = pattern.segments[sb]
            mesh_a = meshes[seg_a.panel_id]
            mesh_b = meshes[seg_b.panel_id]
            pts_a = _segment_points(seg_a, spacing, du)
            pts_b = _segment_points(seg_b, spacing, du, reverse=True)
            if a_counts[sa] == 1 and b_counts[sb] == 1:
                _emit_pairs(threads, mesh_a, mesh_b, pts_a, pts_b, "seam")
                continue
            # gathered pair: the doubly-matched side compresses 2:1; match at
            # the half-unit level, alternate halves of the longer side fold
            if a_counts[sa] == 2:
                short_seg, short_mesh, short_pts = seg_a, mesh_a, pts_a
                long_seg, long_mesh, long_pts = seg_b, mesh_b, pts_b
                ordinal = 0 if (sa, sb) == next(
                    pr for pr in seam.pairs if pr[0] == sa) else 1
            else:
                short_seg, short_mesh, short_pts = seg_b, mesh_b, pts_b
                long_seg, long_mesh, long_pts = seg_a, mesh_a, pts_a
                ordinal = 0 if (sa, sb) == next(
                    pr for pr in seam.pairs if pr[1] == sb) else 1
            # the short segment's half `ordinal` stitches to the first half
            # of this long segment; the long segment's second half self-folds
            _emit_pairs(threads, short_mesh, long_mesh,
                        _half_points(short_pts, ordinal),
                        _half_points(long_pts, 0), "seam")
            _emit_self_fold(threads, long_mesh, _half_points(long_pts, 1),
                            "gather-fold")

    for pid in sorted(pattern.panels):
        panel = pattern.panels[pid]
        mesh = meshes[pid]
        for cell in sorted(panel.cells):
            data = panel.cells[cell]
            if data.kind != PLEAT:
                continue
            i, j = cell
            x0, y0 = i * du, j * du
            x1, y1 = x0 + du, y0 + du
            n = max(1, round(du / spacing))
            left = [(x0, y0 + (y1 - y0) * k / n) for k in range(n + 1)]
            right = [(x1, y0 + (y1 - y0) * k / n) for k in range(n + 1)]
            bottom = [(x0 + (x1 - x0) * k / n, y0) for k in range(n + 1)]
            top = [(x0 + (x1 - x0) * k / n, y1) for k in range(n + 1)]
            if data.pleat_dir in ("left", "right"):
                _emit_pairs(threads, mesh, mesh, left, right, "pleat-fold")
                _emit_self_fold(threads, mesh, top, "pleat-fold")
                _emit_self_fold(threads, mesh, bottom, "pleat-fold")
            else:
                _emit_pairs(threads, mesh, mesh, bottom, top, "pleat-fold")
                _emit_self_fold(threads, mesh, left, "pleat-fold")
                _emit_self_fold(threads, mesh, right, "pleat-fold")

    for f in pattern.features:
        if f.kind != "dart":
            continue
        legs_by_panel = []
        for piece in f.params.get("pieces", []):
            mesh = meshes[piece["panel"]]
            legs = _mesh_dart_legs(pattern, piece, f.params["width_cm"], spacing)
            legs_by_panel.append((mesh, legs))
        _thread_dart(threads, f.params["variant"], legs_by_panel)
    return threads


def _mesh_dart_legs(pattern: Pattern, piece: dict, w: float, spacing: float):
    du = pattern.config.base_unit
    probe = PanelMesh(panel_id=-1, name="probe", spacing=spacing)
    return _mesh_wedge_piece(probe, piece, du, w, spacing)


def _thread_dart(threads, variant, legs_by_panel):
    if variant in ("triangle", "triangle_seam"):
        mesh, legs = legs_by_panel[0]
        _pair_legs(threads, mesh, legs[0], mesh, legs[1])
    elif variant == "diamond":
        mesh, legs = legs_by_panel[0]
        _pair_legs(threads, mesh, legs[0], mesh, legs[1])  # lower halves
        _pair_legs(threads, mesh, legs[2], mesh, legs[3])  # upper halves
    elif variant == "diamond_across":
        for mesh, legs in legs_by_panel:
            _pair_legs(threads, mesh, legs[0], mesh, legs[1])
    elif variant == "diamond_seam":
        for mesh, legs in legs_by_panel:
            _pair_legs(threads, mesh, legs[0], mesh, legs[1])
    elif variant == "corner":
        (mesh_a, legs_a), (mesh_b, legs_b) = legs_by_panel
        _pair_legs(threads, mesh_a, legs_a[0], mesh_b, legs_b[0])


def _pair_legs(threads, mesh_a, leg_a, mesh_b, leg_b):
    if len(leg_a) != len(leg_b):
        raise ResolutionMismatch(
            f"dart legs differ: {len(leg_a)} vs {len(leg_b)} vertices"
        )
    for pa, pb in zip(leg_a, leg_b):
        va = mesh_a.lookup(*pa)
        vb = mesh_b.lookup(*pb)
        if va is None or vb is None or (mesh_a is mesh_b and va == vb):
            continue
        threads.append(Thread(mesh_a.panel_id, va, mesh_b.panel_id, vb,
                              "dart-close"))


# -- bundle export ----------------------------------------------------------------


def build_bundle(pattern: Pattern, offsets: dict, spacing: float = 1.0) -> MeshBundle:
    placed = place_panels(pattern, offsets)
    meshes = {}
    for pid in sorted(pattern.panels):
        mesh = triangulate(pattern, pid, spacing)
        mesh.offset = placed[pid]["offset"]
        mesh.depth = placed[pid]["depth"]
        meshes[pid] = mesh
    threads = generate_threads(pattern, meshes, spacing)
    return MeshBundle(meshes=meshes, threads=threads, spacing=spacing)


def mesh_obj(mesh: PanelMesh) -> str:
    lines = [f"o panel_{mesh.panel_id}"]
    for x, y, z in mesh.positions_3d():
        lines.append(f"v {x:.6f} {y:.6f} {z:.6f}")
    for a, b, c in mesh.triangles:
        lines.append(f"f {a + 1} {b + 1} {c + 1}")
    return "\n".join(lines) + "\n"


def sidecar_text(bundle: MeshBundle) -> str:
    lines = ["# sewing thread constraints and fabric parameters"]
    for key, val in sorted(bundle.fabric.items()):
        lines.append(f"param {key} {val}")
    for t in bundle.threads:
        lines.append(
            f"thread panel_{t.mesh_a} {t.vid_a} panel_{t.mesh_b} {t.vid_b} {t.tag}"
        )
    return "\n".join(lines) + "\n"


def export_bundle(bundle: MeshBundle, out_dir) -> list[str]:
    import os

    os.makedirs(out_dir, exist_ok=True)
    written = []
    for pid in sorted(bundle.meshes):
        path = os.path.join(out_dir, f"panel_{pid}.obj")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(mesh_obj(bundle.meshes[pid]))
        written.append(path)
    path = os.path.join(out_dir, "threads.txt")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(sidecar_text(bundle))
    written.append(path)
    return written
