"""Pattern document model and the phase-1 operations.

A pattern moves through three phases. In Draw, panels are rectilinear
outlines on the unit grid. In Stitch, edges gain break points and are paired
into seams of equal flat length. Entering Features rasterizes every panel
into unit cells and boundary segments and gives each seam an identity planar
matching; outlines and orientations are immutable from then on.

Every accepted mutation appends one entry to the operation log and bumps the
revision; serialization stores config plus the log, and loading replays it.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from . import geometry, seams
from .config import PatternConfig
from .errors import (
    AlreadySeamed,
    DuplicateBreak,
    LengthMismatch,
    NotOnGrid,
    PanelTooLarge,
    PhaseViolation,
    SelfSeam,
    UnknownRef,
    UnstitchedDanglingState,
)
from .geometry import Cell, Point

PHASES = ("draw", "stitch", "features")

FOUNDATION = "foundation"
PLEAT = "pleat"
DART_HOLE = "dart_hole"


@dataclass
class CellData:
    kind: str = FOUNDATION
    pleat_dir: str | None = None
    dart_id: int | None = None


@dataclass
class Segment:
    """One base-unit piece of a panel boundary edge."""

    id: int
    edge_id: int
    panel_id: int
    a: Point
    b: Point
    active: bool = True
    inactive_reason: str | None = None

    @property
    def axis(self) -> str:
        return "h" if self.a[1] == self.b[1] else "v"


@dataclass
class Edge:
    """A straight stitchable run of a panel boundary."""

    id: int
    panel_id: int
    start: Point
    end: Point
    segment_ids: list[int] = field(default_factory=list)
    seam_id: int | None = None
    side: str | None = None

    @property
    def direction(self) -> tuple[int, int]:
        dx = self.end[0] - self.start[0]
        dy = self.end[1] - self.start[1]
        n = abs(dx) + abs(dy)
        return (dx // n if dx else 0, dy // n if dy else 0)

    @property
    def flat_units(self) -> int:
        return abs(self.end[0] - self.start[0]) + abs(self.end[1] - self.start[1])


@dataclass
class Seam:
    id: int
    edge_a: int
    edge_b: int
    # matched segment-id pairs in boundary order along side a
    pairs: list[tuple[int, int]] = field(default_factory=list)


@dataclass
class Panel:
    id: int
    name: str
    outline: tuple[Point, ...]
    face_up: str = "outside"  # or "inside"
    cells: dict[Cell, CellData] = field(default_factory=dict)


@dataclass
class FeatureRecord:
    kind: str
    params: dict
    revision: int


class Pattern:
    def __init__(self, config: PatternConfig):
        self.config = config.validate()
        self.phase = "draw"
        self.panels: dict[int, Panel] = {}
        self.edges: dict[int, Edge] = {}
        self.segments: dict[int, Segment] = {}
        self.seams: dict[int, Seam] = {}
        self.features: list[FeatureRecord] = []
        self.op_log: list[dict] = []
        self.revision = 0
        self.feature_stage = 0  # 0 none, 1 gathers, 2 pleats, 3 darts
        self._next_id = {"panel": 1, "edge": 1, "segment": 1, "seam": 1, "dart": 1}

    # -- identity ---------------------------------------------------------

    def new_id(self, kind: str) -> int:
        n = self._next_id[kind]
        self._next_id[kind] = n + 1
        return n

    def clone(self) -> "Pattern":
        return copy.deepcopy(self)

    def record(self, op: dict) -> None:
        self.op_log.append(op)
        self.revision += 1

    # -- lookups ----------------------------------------------------------

    def panel(self, panel_id: int) -> Panel:
        try:
            return self.panels[panel_id]
        except KeyError:
            raise UnknownRef(f"no panel {panel_id}") from None

    def edge(self, edge_id: int) -> Edge:
        try:
            return self.edges[edge_id]
        except KeyError:
            raise UnknownRef(f"no edge {edge_id}") from None

    def find_edge(self, panel_id: int, a: Point, b: Point) -> Edge:
        a, b = tuple(a), tuple(b)
        for e in self.edges.values():
            if e.panel_id != panel_id:
                continue
            if (e.start, e.end) == (a, b) or (e.start, e.end) == (b, a):
                return e
        raise UnknownRef(f"panel {panel_id} has no edge {a}-{b}")

    def edge_of_segment(self, seg: Segment) -> Edge:
        return self.edges[seg.edge_id]

    def ordered_segments(self, edge: Edge) -> list[Segment]:
        d = edge.direction
        segs = [self.segments[sid] for sid in edge.segment_ids]
        segs.sort(key=lambda s: (s.a[0] * d[0] + s.a[1] * d[1]))
        return segs

    def refresh_edge(self, edge: Edge) -> None:
        """Recompute segment order and span after geometry changed."""
        segs = self.ordered_segments(edge)
        edge.segment_ids = [s.id for s in segs]
        if segs:
            edge.start = segs[0].a
            edge.end = segs[-1].b

    def seam_side_ids(self, seam: Seam, side: str) -> list[int]:
        """Ordered ACTIVE segment ids of one seam side.

        Side b is listed in reverse boundary order so that ordinal k on both
        sides refers to physically aligned positions.
        """
        edge = self.edges[seam.edge_a if side == "a" else seam.edge_b]
        segs = [s for s in self.ordered_segments(edge) if s.active]
        if side == "b":
            segs.reverse()
        return [s.id for s in segs]

    def seam_of_edge(self, edge: Edge) -> Seam | None:
        return self.seams.get(edge.seam_id) if edge.seam_id else None

    def segment_matches(self, seg_id: int) -> list[int]:
        seg = self.segments[seg_id]
        edge = self.edges[seg.edge_id]
        if edge.seam_id is None:
            return []
        seam = self.seams[edge.seam_id]
        out = []
        for sa, sb in seam.pairs:
            if sa == seg_id:
                out.append(sb)
            elif sb == seg_id:
                out.append(sa)
        return out

    def cell_owner_of_segment(self, seg: Segment) -> Cell:
        """The panel cell whose face this segment is."""
        panel = self.panels[seg.panel_id]
        (x1, y1), (x2, y2) = seg.a, seg.b
        if y1 == y2:  # horizontal: cell below or above
            below = (min(x1, x2), y1 - 1)
            above = (min(x1, x2), y1)
            return below if below in panel.cells else above
        left = (x1 - 1, min(y1, y2))
        right = (x1, min(y1, y2))
        return left if left in panel.cells else right

    # -- op building blocks -------------------------------------------------

    def require_phase(self, *allowed: str) -> None:
        if self.phase not in allowed:
            raise PhaseViolation(
                f"operation requires phase {' or '.join(allowed)}, pattern is in {self.phase}"
            )


# -- phase-1 operations ---------------------------------------------------


def new_pattern(config: PatternConfig | None = None) -> Pattern:
    return Pattern(config or PatternConfig())


def add_panel(pattern: Pattern, outline, name: str | None = None) -> int:
    pattern.require_phase("draw")
    normalized = geometry.validate_outline(outline)
    cells = geometry.rasterize(normalized)
    if len(cells) > pattern.config.max_panel_cells:
        raise PanelTooLarge(
            f"panel has {len(cells)} cells, cap is {pattern.config.max_panel_cells}"
        )
    pid = pattern.new_id("panel")
    pattern.panels[pid] = Panel(
        id=pid, name=name or f"Panel {pid}", outline=normalized
    )
    pattern.record({"op": "add_panel", "outline": [list(p) for p in normalized],
                    "name": pattern.panels[pid].name})
    return pid


def rename_panel(pattern: Pattern, panel_id: int, name: str) -> None:
    pattern.require_phase("draw")
    pattern.panel(panel_id).name = name
    pattern.record({"op": "rename_panel", "panel": panel_id, "name": name})


def move_panel(pattern: Pattern, panel_id: int, dx: int, dy: int) -> None:
    pattern.require_phase("draw")
    panel = pattern.panel(panel_id)
    panel.outline = tuple((x + dx, y + dy) for x, y in panel.outline)
    pattern.record({"op": "move_panel", "panel": panel_id, "dx": dx, "dy": dy})


def flip_panel(pattern: Pattern, panel_id: int) -> None:
    pattern.require_phase("draw")
    panel = pattern.panel(panel_id)
    panel.face_up = "inside" if panel.face_up == "outside" else "outside"
    pattern.record({"op": "flip_panel", "panel": panel_id})


def enter_stitch_phase(pattern: Pattern) -> None:
    pattern.require_phase("draw")
    if not pattern.panels:
        raise PhaseViolation("cannot enter stitching with no panels")
    for panel in pattern.panels.values():
        _build_side_edges(pattern, panel)
    pattern.phase = "stitch"
    pattern.record({"op": "enter_stitch"})


def _build_side_edges(pattern: Pattern, panel: Panel) -> None:
    pts = panel.outline
    n = len(pts)
    for k in range(n):
        a, b = pts[k], pts[(k + 1) % n]
        eid = pattern.new_id("edge")
        pattern.edges[eid] = Edge(id=eid, panel_id=panel.id, start=a, end=b)


def insert_break_point(pattern: Pattern, panel_id: int, point) -> None:
    pattern.require_phase("stitch")
    point = tuple(point)
    if not all(float(c).is_integer() for c in point):
        raise NotOnGrid(f"break point {point} is not a grid point")
    point = (int(point[0]), int(point[1]))
    edge = _edge_containing_point(pattern, panel_id, point)
    if edge is None:
        existing = [
            e for e in pattern.edges.values()
            if e.panel_id == panel_id and point in (e.start, e.end)
        ]
        if existing:
            raise DuplicateBreak(f"{point} is already an edge endpoint")
        raise NotOnGrid(f"{point} does not lie on an edge of panel {panel_id}")
    if edge.seam_id is not None:
        raise AlreadySeamed("cannot split an edge that is already in a seam")
    e1 = pattern.new_id("edge")
    e2 = pattern.new_id("edge")
    pattern.edges[e1] = Edge(id=e1, panel_id=panel_id, start=edge.start, end=point)
    pattern.edges[e2] = Edge(id=e2, panel_id=panel_id, start=point, end=edge.end)
    del pattern.edges[edge.id]
    pattern.record({"op": "break", "panel": panel_id, "point": list(point)})


def _edge_containing_point(pattern: Pattern, panel_id: int, point: Point) -> Edge | None:
    for e in pattern.edges.values():
        if e.panel_id != panel_id or point in (e.start, e.end):
            continue
        (x1, y1), (x2, y2) = e.start, e.end
        if x1 == x2 and point[0] == x1 and min(y1, y2) < point[1] < max(y1, y2):
            return e
        if y1 == y2 and point[1] == y1 and min(x1, x2) < point[0] < max(x1, x2):
            return e
    return None


def stitch(pattern: Pattern, ref_a: dict, ref_b: dict) -> int:
    """Seam two free edges of equal flat length.

    Edge refs are {"panel": id, "a": [x, y], "b": [x, y]}.
    """
    pattern.require_phase("stitch")
    edge_a = pattern.find_edge(ref_a["panel"], ref_a["a"], ref_a["b"])
    edge_b = pattern.find_edge(ref_b["panel"], ref_b["a"], ref_b["b"])
    if edge_a.id == edge_b.id:
        raise SelfSeam("an edge cannot be seamed to itself")
    if edge_a.seam_id is not None or edge_b.seam_id is not None:
        raise AlreadySeamed("both edges must be free")
    if edge_a.flat_units != edge_b.flat_units:
        raise LengthMismatch(
            f"flat lengths differ: {edge_a.flat_units} vs {edge_b.flat_units} units"
        )
    sid = pattern.new_id("seam")
    pattern.seams[sid] = Seam(id=sid, edge_a=edge_a.id, edge_b=edge_b.id)
    edge_a.seam_id, edge_a.side = sid, "a"
    edge_b.seam_id, edge_b.side = sid, "b"
    pattern.record({"op": "stitch", "edge_a": _edge_ref(edge_a), "edge_b": _edge_ref(edge_b)})
    return sid


def _edge_ref(edge: Edge) -> dict:
    return {"panel": edge.panel_id, "a": list(edge.start), "b": list(edge.end)}


def enter_features_phase(pattern: Pattern) -> None:
    pattern.require_phase("stitch")
    for panel in sorted(pattern.panels.values(), key=lambda p: p.id):
        cells = geometry.rasterize(panel.outline)
        panel.cells = {c: CellData() for c in sorted(cells)}
        _build_segments(pattern, panel)
    for seam in sorted(pattern.seams.values(), key=lambda s: s.id):
        a_ids = pattern.seam_side_ids(seam, "a")
        b_ids = pattern.seam_side_ids(seam, "b")
        if len(a_ids) != len(b_ids):
            raise UnstitchedDanglingState(
                f"seam {seam.id} sides have unequal lengths {len(a_ids)} vs {len(b_ids)}"
            )
        seam.pairs = seams.init_matching(a_ids, b_ids)
    pattern.phase = "features"
    pattern.record({"op": "enter_features"})


def _build_segments(pattern: Pattern, panel: Panel) -> None:
    panel_edges = sorted(
        (e for e in pattern.edges.values() if e.panel_id == panel.id),
        key=lambda e: e.id,
    )
    for edge in panel_edges:
        d = edge.direction
        x, y = edge.start
        edge.segment_ids = []
        for _ in range(edge.flat_units):
            nxt = (x + d[0], y + d[1])
            sid = pattern.new_id("segment")
            pattern.segments[sid] = Segment(
                id=sid, edge_id=edge.id, panel_id=panel.id, a=(x, y), b=nxt
            )
            edge.segment_ids.append(sid)
            x, y = nxt


# -- validation -----------------------------------------------------------


def validate_pattern(pattern: Pattern) -> list[str]:
    """All structural invariants; returns a list of violation strings."""
    problems: list[str] = []
    for panel in pattern.panels.values():
        try:
            geometry.validate_outline(panel.outline)
        except Exception as exc:  # noqa: BLE001 - collecting diagnostics
            problems.append(f"panel {panel.id}: outline invalid: {exc}")
        if pattern.phase == "features":
            if not panel.cells:
                problems.append(f"panel {panel.id}: not rasterized")
            elif not geometry.is_connected(set(panel.cells)):
                problems.append(f"panel {panel.id}: cells disconnected")
    if pattern.phase == "features":
        for seam in pattern.seams.values():
            a_ids = pattern.seam_side_ids(seam, "a")
            b_ids = pattern.seam_side_ids(seam, "b")
            if not seams.check_ratio(len(a_ids), len(b_ids)):
                problems.append(
                    f"seam {seam.id}: active lengths {len(a_ids)}:{len(b_ids)} violate the 2:1 bound"
                )
            pos_a = {sid: k + 1 for k, sid in enumerate(a_ids)}
            pos_b = {sid: k + 1 for k, sid in enumerate(b_ids)}
            try:
                ordinal = [(pos_a[sa], pos_b[sb]) for sa, sb in seam.pairs]
            except KeyError:
                problems.append(f"seam {seam.id}: matching references inactive segments")
                continue
            if not seams.verify_pairs(ordinal, len(a_ids), len(b_ids)):
                problems.append(f"seam {seam.id}: matching is not a planar 1-2 matching")
        for seg in pattern.segments.values():
            if not seg.active and pattern.segment_matches(seg.id):
                problems.append(f"segment {seg.id}: inactive but matched")
    return problems


def canonical_view(pattern: Pattern) -> dict:
    """Full JSON-ready snapshot of the grid state, stable key order.

    This is the client-visible state: diffs are patches against it, and the
    atomicity guarantee is byte-identity of its canonical dump.
    """
    panels = {}
    for pid in sorted(pattern.panels):
        p = pattern.panels[pid]
        panels[str(pid)] = {
            "name": p.name,
            "face_up": p.face_up,
            "outline": [list(v) for v in p.outline],
            "cells": [
                [c[0], c[1], d.kind, d.pleat_dir or "", d.dart_id or 0]
                for c, d in sorted(p.cells.items())
            ],
        }
    edges = {}
    for eid in sorted(pattern.edges):
        e = pattern.edges[eid]
        edges[str(eid)] = {
            "panel": e.panel_id,
            "start": list(e.start),
            "end": list(e.end),
            "seam": e.seam_id or 0,
            "side": e.side or "",
            "segments": [
                {
                    "id": s.id,
                    "a": list(s.a),
                    "b": list(s.b),
                    "active": s.active,
                    "reason": s.inactive_reason or "",
                }
                for s in pattern.ordered_segments(e)
            ],
        }
    seams_view = {}
    for sid in sorted(pattern.seams):
        s = pattern.seams[sid]
        seams_view[str(sid)] = {
            "edge_a": s.edge_a,
            "edge_b": s.edge_b,
            "pairs": [list(pr) for pr in s.pairs],
        }
    return {
        "phase": pattern.phase,
        "revision": pattern.revision,
        "stage": pattern.feature_stage,
        "panels": panels,
        "edges": edges,
        "seams": seams_view,
        "features": [
            {"kind": f.kind, "params": f.params, "revision": f.revision}
            for f in pattern.features
        ],
    }


def fold_accounting(pattern: Pattern, panel_id: int) -> dict:
    """Flat vs folded extent per axis; pleats fold one unit each."""
    panel = pattern.panel(panel_id)
    out = {}
    for axis, idx, dirs in (("x", 0, ("left", "right")), ("y", 1, ("up", "down"))):
        lo = min(c[idx] for c in panel.cells)
        hi = max(c[idx] for c in panel.cells) + 1
        pleats = sum(
            1 for cd in panel.cells.values()
            if cd.kind == PLEAT and cd.pleat_dir in dirs
        )
        out[axis] = {"flat_units": hi - lo, "pleats": pleats,
                     "folded_units": hi - lo - pleats}
    return out
