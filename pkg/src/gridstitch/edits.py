"""Phase-2 feature editing: strip operations, gathers, pleats, darts.

Every edit is atomic: it runs on a clone and the pattern is swapped only on
success, so a rejected edit leaves the document byte-identical. Geometry is
mutated first; afterwards every seam whose active segment list changed is
rematched through the windowed replanner, and any infeasibility rejects the
whole edit.

Feature order is gated per session: gathers, then pleats, then darts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import geometry
from . import seams as seamlib
from .errors import (
    AlreadyGathered,
    AlreadyPleat,
    CorruptDocument,
    DartOverlap,
    DisconnectionHazard,
    FeatureInWay,
    GatheredSeam,
    InfeasibleFold,
    InsufficientSpace,
    InvalidFeature,
    NonUniversalOnSeam,
    NotInSeam,
    OrderViolation,
    PanelTooLarge,
    PatternError,
    PhaseViolation,
    RatioViolation,
    UnknownRef,
)
from .geometry import DIRS, Cell, Point
from .pattern import (
    DART_HOLE,
    FOUNDATION,
    PLEAT,
    CellData,
    FeatureRecord,
    Panel,
    Pattern,
    Segment,
    validate_pattern,
)

GATHER_STAGE, PLEAT_STAGE, DART_STAGE = 1, 2, 3

# faces folded away by each pleat direction: the cell's edges parallel to
# the fold movement (the fold line is perpendicular to them)
FOLDED_FACES = {
    "left": ("down", "up"),
    "right": ("down", "up"),
    "up": ("left", "right"),
    "down": ("left", "right"),
}


@dataclass
class EditResult:
    accepted: bool
    reason: str | None = None
    detail: str | None = None
    revision: int | None = None
    affected_seams: list[int] = field(default_factory=list)
    matching_diffs: dict = field(default_factory=dict)
    view_patch: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "reason": self.reason,
            "detail": self.detail,
            "revision": self.revision,
            "affected_seams": self.affected_seams,
            "matching_diffs": self.matching_diffs,
            "view_patch": self.view_patch,
        }


# -- edit harness ----------------------------------------------------------


def _run_edit(pattern: Pattern, op: dict, stage: int | None, fn, remap=None) -> EditResult:
    from .pattern import canonical_view  # local import: view lives with the model

    work = pattern.clone()
    try:
        work.require_phase("features")
        if stage is not None and work.feature_stage > stage:
            raise OrderViolation(
                f"features must be added in order gathers, pleats, darts; "
                f"session already at stage {work.feature_stage}"
            )
        snapshots = {
            sid: (list(s.pairs), work.seam_side_ids(s, "a"), work.seam_side_ids(s, "b"))
            for sid, s in work.seams.items()
        }
        fn(work)
        _replan_changed_seams(work, snapshots)
        if stage is not None:
            work.feature_stage = max(work.feature_stage, stage)
        problems = validate_pattern(work)
        if problems:
            raise CorruptDocument("; ".join(problems))
    except PatternError as exc:
        cls = type(exc)
        if remap and cls in remap:
            cls = remap[cls]
        return EditResult(False, reason=cls.__name__, detail=str(exc),
                          revision=pattern.revision)
    work.record(op)

    old_view = canonical_view(pattern)
    new_view = canonical_view(work)
    patch: dict = {"revision": new_view["revision"], "phase": new_view["phase"],
                   "stage": new_view["stage"], "features": new_view["features"]}
    for section in ("panels", "edges", "seams"):
        changed = {
            key: val for key, val in new_view[section].items()
            if old_view[section].get(key) != val
        }
        removed = [key for key in old_view[section] if key not in new_view[section]]
        patch[section] = changed
        patch[f"{section}_removed"] = removed
    diffs = {
        sid: {"before": old_view["seams"][sid]["pairs"], "after": v["pairs"]}
        for sid, v in patch["seams"].items() if sid in old_view["seams"]
    }

    result = EditResult(
        True,
        revision=work.revision,
        affected_seams=sorted(diffs),
        matching_diffs=diffs,
        view_patch=patch,
    )
    pattern.__dict__.update(work.__dict__)
    return result


def _replan_changed_seams(work: Pattern, snapshots: dict) -> None:
    for sid in sorted(work.seams):
        seam = work.seams[sid]
        old_pairs, old_a, old_b = snapshots[sid]
        new_a = work.seam_side_ids(seam, "a")
        new_b = work.seam_side_ids(seam, "b")
        if new_a == old_a and new_b == old_b:
            continue
        seam.pairs = seamlib.replan(old_pairs, old_a, old_b, new_a, new_b)


# -- strip geometry with segment bookkeeping --------------------------------


def _seg_key(a: Point, b: Point):
    return (min(a, b), max(a, b))


def _panel_segments(work: Pattern, panel_id: int) -> list[Segment]:
    return sorted(
        (s for s in work.segments.values() if s.panel_id == panel_id),
        key=lambda s: s.id,
    )


def _facing(seg: Segment, owner: Cell) -> str:
    (x1, y1), (x2, y2) = seg.a, seg.b
    if y1 == y2:
        return "up" if owner == (min(x1, x2), y1 - 1) else "down"
    return "right" if owner == (x1 - 1, min(y1, y2)) else "left"


def _shift_points(seg: Segment, d) -> tuple[Point, Point]:
    return ((seg.a[0] + d[0], seg.a[1] + d[1]), (seg.b[0] + d[0], seg.b[1] + d[1]))


def _do_insert_strip(work: Pattern, panel: Panel, anchor: Cell, axis: str, side: str,
                     dup_kind: CellData | None = None,
                     dup_at: Cell | None = None) -> list[Cell]:
    """Duplicate the strip through `anchor` beside itself; returns dup cells.

    The duplicate cells are plain foundation fabric except the one at
    `dup_at` (the inserted pleat, when requested).
    """
    if (axis == "col") != (side in ("left", "right")):
        raise InvalidFeature(f"strip axis {axis} cannot be inserted to the {side}")
    cells = set(panel.cells)
    if anchor not in cells:
        raise UnknownRef(f"cell {anchor} not in panel {panel.id}")
    strip = geometry.strip_cells(cells, anchor, axis)
    if len(cells) + len(strip) > work.config.max_panel_cells:
        raise PanelTooLarge(
            f"panel would grow to {len(cells) + len(strip)} cells"
        )
    plan = geometry.plan_insert(cells, strip, side)
    d = DIRS[side]
    strip_set = set(strip)

    owners = {}
    for seg in _panel_segments(work, panel.id):
        owners[seg.id] = work.cell_owner_of_segment(seg)

    # move cell payloads
    new_cells: dict[Cell, CellData] = {}
    for pos, data in panel.cells.items():
        new_cells[plan.moved.get(pos, pos)] = data
    for dup in plan.dup:
        new_cells[dup] = CellData()
    panel.cells = new_cells

    # relocate segments: shifted region and re-homed insertion faces move by d
    for seg in _panel_segments(work, panel.id):
        owner = owners[seg.id]
        if owner in plan.moved or (owner in strip_set and _facing(seg, owner) == side):
            seg.a, seg.b = _shift_points(seg, d)

    # new boundary faces = the duplicate strip's two endpoint faces
    claimed = {_seg_key(s.a, s.b) for s in _panel_segments(work, panel.id)}
    new_faces = []
    for cell, face in geometry.boundary_sides(set(panel.cells)):
        a, b = geometry.cell_side_points(cell, face)
        if _seg_key(a, b) not in claimed:
            new_faces.append((cell, face, a, b))
    assert len(new_faces) == 2, f"strip insertion exposed {len(new_faces)} faces"

    lo_end, hi_end = strip[0], strip[-1]
    for cell, face, a, b in sorted(new_faces):
        # attach to the edge of the strip's own endpoint face on that end
        end_cell = lo_end if face in ("down", "left") else hi_end
        ref_a, ref_b = geometry.cell_side_points(end_cell, face)
        ref_seg = next(
            s for s in _panel_segments(work, panel.id)
            if _seg_key(s.a, s.b) == _seg_key(ref_a, ref_b)
        )
        edge = work.edges[ref_seg.edge_id]
        dirn = edge.direction
        sid = work.new_id("segment")
        if ((b[0] - a[0]) * dirn[0] + (b[1] - a[1]) * dirn[1]) < 0:
            a, b = b, a
        work.segments[sid] = Segment(
            id=sid, edge_id=edge.id, panel_id=panel.id, a=a, b=b
        )
        edge.segment_ids.append(sid)
        work.refresh_edge(edge)

    for e in work.edges.values():
        if e.panel_id == panel.id:
            work.refresh_edge(e)

    dup_cells = list(plan.dup)
    if dup_at is not None:
        if dup_at not in panel.cells:
            raise InvalidFeature(f"pleat target {dup_at} was not created")
        panel.cells[dup_at] = dup_kind or CellData()
    return dup_cells


def _do_delete_strip(work: Pattern, panel: Panel, anchor: Cell, axis: str) -> list[Cell]:
    cells = set(panel.cells)
    if anchor not in cells:
        raise UnknownRef(f"cell {anchor} not in panel {panel.id}")
    strip = geometry.strip_cells(cells, anchor, axis)
    for c in strip:
        if panel.cells[c].kind != FOUNDATION:
            raise FeatureInWay(f"strip cell {c} carries a {panel.cells[c].kind} feature")
    if len(strip) == len(cells):
        raise FeatureInWay("cannot delete the only strip of a panel")
    side = "right" if axis == "col" else "up"
    plan = geometry.plan_delete(cells, strip, side)
    d = DIRS[side]
    back = (-d[0], -d[1])
    strip_set = set(strip)

    owners = {
        seg.id: work.cell_owner_of_segment(seg)
        for seg in _panel_segments(work, panel.id)
    }

    new_cells: dict[Cell, CellData] = {}
    for pos, data in panel.cells.items():
        if pos in strip_set:
            continue
        new_cells[plan.moved.get(pos, pos)] = data
    panel.cells = new_cells
    cellset = set(new_cells)
    boundary = {
        _seg_key(*geometry.cell_side_points(c, f))
        for c, f in geometry.boundary_sides(cellset)
    }

    claimed: set = set()
    dropped: list[Segment] = []
    survivors = [s for s in _panel_segments(work, panel.id) if owners[s.id] not in strip_set]
    strip_owned = [s for s in _panel_segments(work, panel.id) if owners[s.id] in strip_set]
    for seg in survivors:
        if owners[seg.id] in plan.moved:
            seg.a, seg.b = _shift_points(seg, back)
        key = _seg_key(seg.a, seg.b)
        assert key in boundary and key not in claimed
        claimed.add(key)
    for seg in strip_owned:
        if _facing(seg, owners[seg.id]) == side:
            cand = _shift_points(seg, back)
        else:
            cand = (seg.a, seg.b)
        key = _seg_key(*cand)
        if key in boundary and key not in claimed:
            seg.a, seg.b = cand
            claimed.add(key)
        else:
            dropped.append(seg)

    for seg in dropped:
        edge = work.edges[seg.edge_id]
        edge.segment_ids.remove(seg.id)
        del work.segments[seg.id]
    for e in work.edges.values():
        if e.panel_id == panel.id:
            work.refresh_edge(e)
    return strip


# -- public strip operations -------------------------------------------------


def insert_strip(pattern: Pattern, panel_id: int, cell, axis: str, side: str) -> EditResult:
    cell = tuple(cell)
    op = {"op": "insert_strip", "panel": panel_id, "cell": list(cell),
          "axis": axis, "side": side}

    def fn(work: Pattern):
        _do_insert_strip(work, work.panel(panel_id), cell, axis, side)

    return _run_edit(pattern, op, None, fn)


def delete_strip(pattern: Pattern, panel_id: int, cell, axis: str) -> EditResult:
    cell = tuple(cell)
    op = {"op": "delete_strip", "panel": panel_id, "cell": list(cell), "axis": axis}

    def fn(work: Pattern):
        _do_delete_strip(work, work.panel(panel_id), cell, axis)

    return _run_edit(pattern, op, None, fn)


# -- gathers -----------------------------------------------------------------


def gather_edge(pattern: Pattern, edge_ref: dict) -> EditResult:
    op = {"op": "gather", "edge": edge_ref}

    def fn(work: Pattern):
        edge = work.find_edge(edge_ref["panel"], edge_ref["a"], edge_ref["b"])
        if edge.seam_id is None:
            raise NotInSeam(f"edge {edge.start}-{edge.end} is not part of a seam")
        segs = [s for s in work.ordered_segments(edge) if s.active]
        if not segs:
            raise NotInSeam("edge has no active segments")
        touched = set()
        for s in segs:
            matches = work.segment_matches(s.id)
            touched.add(len(matches))
            for m in matches:
                if len(work.segment_matches(m)) > 1:
                    raise AlreadyGathered(
                        "a segment in this seam already carries two matches"
                    )
        if 2 in touched:
            raise AlreadyGathered("the selected edge is already gathered")

        panel = work.panel(edge.panel_id)
        axis = "col" if segs[0].axis == "h" else "row"
        d = edge.direction
        side = {(1, 0): "right", (-1, 0): "right", (0, 1): "up", (0, -1): "up"}[d]
        anchors = [work.cell_owner_of_segment(s) for s in segs]
        key = (lambda c: -c[0]) if axis == "col" else (lambda c: -c[1])
        for anchor in sorted(set(anchors), key=key):
            for c in geometry.strip_cells(set(panel.cells), anchor, axis):
                if panel.cells[c].kind != FOUNDATION:
                    raise FeatureInWay(f"strip through {anchor} carries a feature")
            _do_insert_strip(work, panel, anchor, axis, side)
        work.features.append(FeatureRecord(
            kind="gather", params={"edge": edge_ref}, revision=work.revision + 1))

    return _run_edit(pattern, op, GATHER_STAGE, fn,
                     remap={RatioViolation: AlreadyGathered})


# -- pleats --------------------------------------------------------------------


def _fold_segments(work: Pattern, panel: Panel, cell: Cell, direction: str) -> None:
    """Deactivate the boundary faces a fold consumes."""
    index = {
        _seg_key(s.a, s.b): s for s in _panel_segments(work, panel.id)
    }
    for face in FOLDED_FACES[direction]:
        a, b = geometry.cell_side_points(cell, face)
        seg = index.get(_seg_key(a, b))
        if seg is not None and seg.active:
            seg.active = False
            seg.inactive_reason = "pleat"


def _check_fold_target(work: Pattern, panel: Panel, cell: Cell, direction: str) -> None:
    d = DIRS[direction]
    target = (cell[0] + d[0], cell[1] + d[1])
    if target not in panel.cells:
        raise InfeasibleFold(f"no fold target cell {target} in direction {direction}")
    if panel.cells[target].kind == DART_HOLE:
        raise InfeasibleFold("fold target cell is consumed by a dart")


def convert_to_pleat(pattern: Pattern, panel_id: int, cell, direction: str) -> EditResult:
    cell = tuple(cell)
    op = {"op": "convert_pleat", "panel": panel_id, "cell": list(cell),
          "direction": direction}

    def fn(work: Pattern):
        if direction not in DIRS:
            raise InvalidFeature(f"unknown fold direction {direction!r}")
        panel = work.panel(panel_id)
        if cell not in panel.cells:
            raise UnknownRef(f"cell {cell} not in panel {panel_id}")
        data = panel.cells[cell]
        if data.kind == PLEAT:
            raise AlreadyPleat(f"cell {cell} is already a pleat")
        if data.kind == DART_HOLE:
            raise InfeasibleFold(f"cell {cell} is consumed by a dart")
        _check_fold_target(work, panel, cell, direction)
        panel.cells[cell] = CellData(kind=PLEAT, pleat_dir=direction)
        _fold_segments(work, panel, cell, direction)
        work.features.append(FeatureRecord(
            kind="pleat_convert",
            params={"panel": panel_id, "cell": list(cell), "direction": direction},
            revision=work.revision + 1))

    return _run_edit(pattern, op, PLEAT_STAGE, fn,
                     remap={RatioViolation: InfeasibleFold})


def insert_pleat(pattern: Pattern, panel_id: int, cell, direction: str) -> EditResult:
    cell = tuple(cell)
    op = {"op": "insert_pleat", "panel": panel_id, "cell": list(cell),
          "direction": direction}

    def fn(work: Pattern):
        if direction not in DIRS:
            raise InvalidFeature(f"unknown fold direction {direction!r}")
        panel = work.panel(panel_id)
        if cell not in panel.cells:
            raise UnknownRef(f"cell {cell} not in panel {panel_id}")
        axis = "col" if direction in ("left", "right") else "row"
        d = DIRS[direction]
        dup_at = (cell[0] + d[0], cell[1] + d[1])
        _do_insert_strip(work, panel, cell, axis, direction,
                         dup_kind=CellData(kind=PLEAT, pleat_dir=direction),
                         dup_at=dup_at)
        _fold_segments(work, panel, dup_at, direction)
        work.features.append(FeatureRecord(
            kind="pleat_insert",
            params={"panel": panel_id, "cell": list(cell), "direction": direction},
            revision=work.revision + 1))

    return _run_edit(pattern, op, PLEAT_STAGE, fn)


def resolve_by_expand(pattern: Pattern, panel_id: int, cell, direction: str) -> EditResult:
    """Restore a seam shortened by a pleat conversion by widening the panel."""
    cell = tuple(cell)
    op = {"op": "resolve_expand", "panel": panel_id, "cell": list(cell),
          "direction": direction}

    def fn(work: Pattern):
        panel = work.panel(panel_id)
        if cell not in panel.cells or panel.cells[cell].kind != PLEAT:
            raise InvalidFeature(f"cell {cell} is not a pleat")
        axis = "col" if direction in ("left", "right") else "row"
        _do_insert_strip(work, panel, cell, axis, direction)

    return _run_edit(pattern, op, PLEAT_STAGE, fn)


def resolve_by_delete(pattern: Pattern, panel_id: int, cell, direction: str) -> EditResult:
    """Remove the opposite-edge strip that a pleat conversion left gathered."""
    cell = tuple(cell)
    op = {"op": "resolve_delete", "panel": panel_id, "cell": list(cell),
          "direction": direction}

    def fn(work: Pattern):
        panel = work.panel(panel_id)
        if cell not in panel.cells or panel.cells[cell].kind != PLEAT:
            raise InvalidFeature(f"cell {cell} is not a pleat")
        index = {_seg_key(s.a, s.b): s for s in _panel_segments(work, panel_id)}
        folded = None
        for face in FOLDED_FACES[direction]:
            a, b = geometry.cell_side_points(cell, face)
            seg = index.get(_seg_key(a, b))
            if seg is not None and not seg.active and seg.inactive_reason == "pleat":
                edge = work.edges[seg.edge_id]
                if edge.seam_id is not None:
                    folded = seg
                    break
        if folded is None:
            raise InvalidFeature("pleat did not shorten any seamed edge")
        seam = work.seams[work.edges[folded.edge_id].seam_id]
        my_side = work.edges[folded.edge_id].side
        opp_side = "b" if my_side == "a" else "a"
        my_ids = work.seam_side_ids(seam, my_side)
        opp_ids = work.seam_side_ids(seam, opp_side)
        # opposite segments bunched onto a doubly-matched partner are the
        # gathered ones; delete the one nearest the fold site
        candidates = [
            k for k, sid in enumerate(opp_ids)
            if any(len(work.segment_matches(m)) > 1 for m in work.segment_matches(sid))
        ]
        if not candidates:
            raise InvalidFeature("opposite edge has no gathered segment to delete")
        my_edge = work.edges[folded.edge_id]
        ordered = work.ordered_segments(my_edge)
        before = sum(1 for s in ordered[: ordered.index(folded)] if s.active)
        target_ord = min(candidates, key=lambda k: (abs(k - before), k))
        target = work.segments[opp_ids[target_ord]]
        opp_panel = work.panel(target.panel_id)
        anchor = work.cell_owner_of_segment(target)
        axis = "col" if target.axis == "h" else "row"
        _do_delete_strip(work, opp_panel, anchor, axis)

    return _run_edit(pattern, op, PLEAT_STAGE, fn)


# -- darts ----------------------------------------------------------------------


def _rect_cells(x0: int, x1: int, y0: int, y1: int) -> list[Cell]:
    return [(i, j) for i in range(x0, x1) for j in range(y0, y1)]


def _bbox(cells: list[Cell]) -> list[int]:
    xs = [c[0] for c in cells]
    ys = [c[1] for c in cells]
    return [min(xs), min(ys), max(xs) + 1, max(ys) + 1]


def _piece(panel_id: int, cells: list[Cell], kind: str, orientation: str,
           base: str | None = None, open_side: str | None = None) -> dict:
    """Mesh-export geometry of one panel's share of a dart module."""
    return {"panel": panel_id, "rect": _bbox(cells), "kind": kind,
            "orientation": orientation, "base": base, "open": open_side}


def _claim_cells(work: Pattern, panel: Panel, cells: list[Cell], dart_id: int) -> None:
    for c in cells:
        if c not in panel.cells:
            raise InsufficientSpace(f"dart would extend beyond panel {panel.id} at {c}")
        kind = panel.cells[c].kind
        if kind == DART_HOLE:
            raise DartOverlap(f"dart would intersect an existing dart at {c}")
        if kind == PLEAT:
            raise InsufficientSpace(f"dart footprint covers a pleat at {c}")
    for c in cells:
        panel.cells[c] = CellData(kind=DART_HOLE, dart_id=dart_id)


def _anchor_sides(panel: Panel, anchor: Point, axis_u) -> tuple[bool, bool]:
    """Whether cells exist on the +depth and -depth sides of the base line."""
    ax, ay = anchor
    if axis_u == (1, 0):  # vertical dart: base horizontal
        above = ((ax - 1, ay) in panel.cells) and ((ax, ay) in panel.cells)
        below = ((ax - 1, ay - 1) in panel.cells) and ((ax, ay - 1) in panel.cells)
        return above, below
    right = ((ax, ay - 1) in panel.cells) and ((ax, ay) in panel.cells)
    left = ((ax - 1, ay - 1) in panel.cells) and ((ax - 1, ay) in panel.cells)
    return right, left


def add_dart(pattern: Pattern, panel_id: int, anchor, orientation: str,
             width_cm: float, height_units: int, style: str = "auto") -> EditResult:
    anchor = tuple(anchor)
    width_cm = float(width_cm)  # logged ops serialize identically for 8 and 8.0
    op = {"op": "dart", "panel": panel_id, "anchor": list(anchor),
          "orientation": orientation, "width_cm": width_cm,
          "height_units": height_units, "style": style}

    def fn(work: Pattern):
        _do_add_dart(work, panel_id, anchor, orientation, width_cm,
                     height_units, style)

    return _run_edit(pattern, op, DART_STAGE, fn,
                     remap={RatioViolation: GatheredSeam})


def _do_add_dart(work: Pattern, panel_id: int, anchor: Point, orientation: str,
                 width_cm: float, height_units: int, style: str) -> None:
    du = work.config.base_unit
    if orientation not in ("v", "h"):
        raise InvalidFeature(f"orientation must be 'v' or 'h', got {orientation!r}")
    if style not in ("auto", "triangle", "diamond"):
        raise InvalidFeature(f"unknown dart style {style!r}")
    if not (0 < width_cm <= 2 * du):
        raise InvalidFeature(f"dart width {width_cm} must be in (0, {2 * du}]")
    if not (isinstance(height_units, int) and height_units >= 1):
        raise InvalidFeature("dart height must be a positive whole number of units")

    panel = work.panel(panel_id)
    n = height_units
    ax, ay = anchor
    u = (1, 0) if orientation == "v" else (0, 1)

    pos_side, neg_side = _anchor_sides(panel, anchor, u)
    interior = pos_side and neg_side and _base_fully_interior(work, panel, anchor, u)

    if interior:
        if style == "triangle":
            raise InvalidFeature("a triangle dart needs an edge anchor")
        _interior_diamond(work, panel, anchor, u, n, width_cm)
        return

    on_parallel_seam = _find_parallel_seam_segments(work, panel, anchor, u, n)
    if on_parallel_seam is not None and style != "triangle":
        _parallel_seam_diamond(work, panel, anchor, u, n, width_cm, on_parallel_seam)
        return

    corner = _find_corner_context(work, panel, anchor, u, n)
    if corner is not None and style == "auto":
        _corner_dart(work, panel, anchor, u, n, width_cm, corner)
        return

    if not pos_side and not neg_side:
        raise InsufficientSpace(f"anchor {anchor} is not inside panel {panel_id}")
    _base_dart(work, panel, anchor, u, n, width_cm, style,
               descend=-1 if neg_side else 1)


def _base_fully_interior(work: Pattern, panel: Panel, anchor: Point, u) -> bool:
    ax, ay = anchor
    if u == (1, 0):
        cells = [(ax - 1, ay - 1), (ax, ay - 1), (ax - 1, ay), (ax, ay)]
    else:
        cells = [(ax - 1, ay - 1), (ax - 1, ay), (ax, ay - 1), (ax, ay)]
    return all(c in panel.cells for c in cells)


def _interior_diamond(work: Pattern, panel: Panel, anchor: Point, u, n: int,
                      width_cm: float) -> None:
    ax, ay = anchor
    if u == (1, 0):
        cells = _rect_cells(ax - 1, ax + 1, ay - n, ay + n)
    else:
        cells = _rect_cells(ax - n, ax + n, ay - 1, ay + 1)
    dart_id = work.new_id("dart")
    _claim_cells(work, panel, cells, dart_id)
    orient = "v" if u == (1, 0) else "h"
    work.features.append(FeatureRecord(
        kind="dart",
        params={"panel": panel.id, "anchor": list(anchor),
                "orientation": orient,
                "width_cm": width_cm, "height_units": n,
                "variant": "diamond", "modules": 2, "dart_id": dart_id,
                "pieces": [_piece(panel.id, cells, "diamond", orient)]},
        revision=work.revision + 1))


def _segments_on_line(work: Pattern, panel: Panel, pts: list[tuple[Point, Point]]):
    index = {_seg_key(s.a, s.b): s for s in _panel_segments(work, panel.id)}
    return [index.get(_seg_key(a, b)) for a, b in pts]


def _find_parallel_seam_segments(work: Pattern, panel: Panel, anchor: Point,
                                 u, n: int):
    """Seam segments consumed by a diamond straddling a seam along its axis."""
    ax, ay = anchor
    perp = (u[1], u[0])
    span = []
    for k in range(-n, n):
        a = (ax + k * perp[0], ay + k * perp[1])
        b = (ax + (k + 1) * perp[0], ay + (k + 1) * perp[1])
        span.append((a, b))
    segs = _segments_on_line(work, panel, span)
    if any(s is None for s in segs):
        return None
    edge_ids = {s.edge_id for s in segs}
    if len(edge_ids) != 1:
        return None
    edge = work.edges[next(iter(edge_ids))]
    if edge.seam_id is None:
        return None
    return segs


def _parallel_seam_diamond(work: Pattern, panel: Panel, anchor: Point, u, n: int,
                           width_cm: float, segs) -> None:
    for s in segs:
        if not s.active:
            raise DartOverlap(f"seam segment at {s.a} already consumed")
        matches = work.segment_matches(s.id)
        if len(matches) != 1:
            raise GatheredSeam("the seam is gathered where the dart would sit")
    partner_ids = [work.segment_matches(s.id)[0] for s in segs]
    partners = [work.segments[pid] for pid in partner_ids]
    partner_panel = work.panel(partners[0].panel_id)
    if any(p.panel_id != partner_panel.id for p in partners):
        raise GatheredSeam("dart span crosses more than one opposite panel")
    for p in partners:
        if len(work.segment_matches(p.id)) != 1:
            raise GatheredSeam("the seam is gathered where the dart would sit")

    my_cells = [work.cell_owner_of_segment(s) for s in segs]
    their_cells = [work.cell_owner_of_segment(p) for p in partners]
    dart_id = work.new_id("dart")
    _claim_cells(work, panel, my_cells, dart_id)
    _claim_cells(work, partner_panel, their_cells, dart_id)
    orient = "v" if u == (1, 0) else "h"
    pieces = [
        _piece(panel.id, my_cells, "half_diamond", orient,
               open_side=_open_side(segs[0], my_cells[0])),
        _piece(partner_panel.id, their_cells, "half_diamond", orient,
               open_side=_open_side(partners[0], their_cells[0])),
    ]
    for s in segs + partners:
        s.active = False
        s.inactive_reason = "dart"
    work.features.append(FeatureRecord(
        kind="dart",
        params={"panel": panel.id, "anchor": list(anchor),
                "orientation": orient,
                "width_cm": width_cm, "height_units": n,
                "variant": "diamond_seam", "modules": 2, "dart_id": dart_id,
                "partner_panel": partner_panel.id, "pieces": pieces},
        revision=work.revision + 1))


def _open_side(seg, owner_cell: Cell) -> str:
    """Which side of its owner cell a segment lies on."""
    (x1, y1), (x2, y2) = seg.a, seg.b
    if y1 == y2:
        return "up" if owner_cell[1] == min(y1, y2) - 1 else "down"
    return "right" if owner_cell[0] == min(x1, x2) - 1 else "left"


def _find_corner_context(work: Pattern, panel: Panel, anchor: Point, u, n: int):
    """Seam ending at the anchor whose first n segments the wedge can consume."""
    perp = (u[1], u[0])
    for sign in (-1, 1):
        span = []
        ok = True
        for k in range(n):
            a = (anchor[0] + sign * k * perp[0], anchor[1] + sign * k * perp[1])
            b = (anchor[0] + sign * (k + 1) * perp[0], anchor[1] + sign * (k + 1) * perp[1])
            span.append((a, b))
        segs = _segments_on_line(work, panel, span)
        if any(s is None for s in segs):
            continue
        edge = work.edges[segs[0].edge_id]
        if edge.seam_id is None or any(s.edge_id != edge.id for s in segs):
            continue
        if anchor not in (edge.start, edge.end):
            continue
        return segs
    return None


def _corner_dart(work: Pattern, panel: Panel, anchor: Point, u, n: int,
                 width_cm: float, segs) -> None:
    for s in segs:
        if not s.active:
            raise DartOverlap("seam segment already consumed")
        if len(work.segment_matches(s.id)) != 1:
            raise GatheredSeam("corner dart requires a flat seam")
    partners = [work.segments[work.segment_matches(s.id)[0]] for s in segs]
    partner_panel = work.panel(partners[0].panel_id)
    for p in partners:
        if len(work.segment_matches(p.id)) != 1 or p.panel_id != partner_panel.id:
            raise GatheredSeam("corner dart requires a flat seam")

    my_cells = [work.cell_owner_of_segment(s) for s in segs]
    their_cells = [work.cell_owner_of_segment(p) for p in partners]

    # the partner panel lives in its own coordinates: its corner is the
    # matched end of the opposite edge, not the anchor point itself
    my_edge = work.edges[segs[0].edge_id]
    their_edge = work.edges[partners[0].edge_id]
    their_corner = their_edge.end if anchor == my_edge.start else their_edge.start

    # base edges touching the corner (perpendicular to the seam) must be
    # free: each panel keeps a fractional w/2 remainder there, which only
    # free edges tolerate
    for s_list, pan, corner in ((segs, panel, anchor),
                                (partners, partner_panel, their_corner)):
        consumed = {sg.id for sg in s_list}
        for sg in _panel_segments(work, pan.id):
            if sg.id in consumed or not sg.active:
                continue
            if corner in (sg.a, sg.b):
                edge = work.edges[sg.edge_id]
                if edge.seam_id is not None:
                    raise NonUniversalOnSeam(
                        "corner dart base must lie on free edges"
                    )

    dart_id = work.new_id("dart")
    _claim_cells(work, panel, my_cells, dart_id)
    _claim_cells(work, partner_panel, their_cells, dart_id)
    orient = "v" if u == (1, 0) else "h"

    def base_of(cells_list, corner):
        box = _bbox(cells_list)
        if orient == "v":
            return "top" if corner[1] == box[3] else "bottom"
        return "right" if corner[0] == box[2] else "left"

    pieces = [
        _piece(panel.id, my_cells, "half_wedge", orient,
               base=base_of(my_cells, anchor),
               open_side=_open_side(segs[0], my_cells[0])),
        _piece(partner_panel.id, their_cells, "half_wedge", orient,
               base=base_of(their_cells, their_corner),
               open_side=_open_side(partners[0], their_cells[0])),
    ]
    for s in segs + partners:
        s.active = False
        s.inactive_reason = "dart"
    work.features.append(FeatureRecord(
        kind="dart",
        params={"panel": panel.id, "anchor": list(anchor),
                "orientation": orient,
                "width_cm": width_cm, "height_units": n,
                "variant": "corner", "modules": 1, "dart_id": dart_id,
                "partner_panel": partner_panel.id, "pieces": pieces},
        revision=work.revision + 1))


def _base_dart(work: Pattern, panel: Panel, anchor: Point, u, n: int,
               width_cm: float, style: str, descend: int) -> None:
    """Triangle dart on an edge, or a diamond crossing a perpendicular seam."""
    du = work.config.base_unit
    ax, ay = anchor
    base_pts = [
        ((ax - u[0], ay - u[1]), (ax, ay)),
        ((ax, ay), (ax + u[0], ay + u[1])),
    ]
    base_segs = _segments_on_line(work, panel, base_pts)
    if any(s is None for s in base_segs):
        raise InsufficientSpace(
            f"dart base at {anchor} does not lie on a straight panel edge"
        )
    if any(not s.active for s in base_segs):
        raise DartOverlap("dart base overlaps an existing feature")
    seamed = [s for s in base_segs if work.edges[s.edge_id].seam_id is not None]

    if u == (1, 0):
        footprint = (_rect_cells(ax - 1, ax + 1, ay - n, ay) if descend < 0
                     else _rect_cells(ax - 1, ax + 1, ay, ay + n))
    else:
        footprint = (_rect_cells(ax - n, ax, ay - 1, ay + 1) if descend < 0
                     else _rect_cells(ax, ax + n, ay - 1, ay + 1))

    if u == (1, 0):
        base_side = "top" if descend < 0 else "bottom"
    else:
        base_side = "right" if descend < 0 else "left"

    if not seamed:
        if style == "diamond":
            raise InsufficientSpace("no seam to carry a diamond dart across")
        dart_id = work.new_id("dart")
        _claim_cells(work, panel, footprint, dart_id)
        if abs(width_cm - 2 * du) < 1e-9:
            for s in base_segs:
                s.active = False
                s.inactive_reason = "dart"
        orient = "v" if u == (1, 0) else "h"
        work.features.append(FeatureRecord(
            kind="dart",
            params={"panel": panel.id, "anchor": list(anchor),
                    "orientation": orient,
                    "width_cm": width_cm, "height_units": n,
                    "variant": "triangle", "modules": 1, "dart_id": dart_id,
                    "pieces": [_piece(panel.id, footprint, "wedge", orient,
                                      base=base_side)]},
            revision=work.revision + 1))
        return

    # base lies on a seam: only the universal width keeps folded lengths on grid
    if abs(width_cm - du) > 1e-9:
        raise NonUniversalOnSeam(
            f"a dart of width {width_cm} cm on a seam leaves a fractional edge; "
            f"only width {du} cm is universal"
        )
    if len(seamed) != 2 or base_segs[0].edge_id != base_segs[1].edge_id:
        raise NonUniversalOnSeam("dart base must lie on a single seamed edge")
    for s in base_segs:
        if len(work.segment_matches(s.id)) != 1:
            raise GatheredSeam("the seam is already gathered at the dart base")
        if len(work.segment_matches(work.segment_matches(s.id)[0])) != 1:
            raise GatheredSeam("the seam is already gathered at the dart base")

    partners = [work.segments[work.segment_matches(s.id)[0]] for s in base_segs]
    partner_panel = work.panel(partners[0].panel_id)

    if style == "diamond":
        # explicitly requested diamond crossing the seam perpendicular to it:
        # both sides lose one base unit
        across, p_descend = _space_across(work, partner_panel, partners, u, n)
        if not across:
            raise InsufficientSpace("no space across the seam for a diamond dart")
        dart_id = work.new_id("dart")
        their_base = _owners(work, partners)
        their_fp = _extend_footprint(their_base, u, p_descend, n)
        _claim_cells(work, panel, footprint, dart_id)
        _claim_cells(work, partner_panel, their_fp, dart_id)
        seam = work.seams[work.edges[base_segs[0].edge_id].seam_id]
        _deactivate_later_ordinal(work, seam, base_segs, partners)
        orient = "v" if u == (1, 0) else "h"
        if u == (1, 0):
            p_base = "top" if p_descend < 0 else "bottom"
        else:
            p_base = "right" if p_descend < 0 else "left"
        pieces = [
            _piece(panel.id, footprint, "wedge", orient, base=base_side),
            _piece(partner_panel.id, their_fp, "wedge", orient, base=p_base),
        ]
        work.features.append(FeatureRecord(
            kind="dart",
            params={"panel": panel.id, "anchor": list(anchor),
                    "orientation": orient,
                    "width_cm": width_cm, "height_units": n,
                    "variant": "diamond_across", "modules": 2, "dart_id": dart_id,
                    "partner_panel": partner_panel.id, "pieces": pieces},
            revision=work.revision + 1))
        return

    # universal triangle dart on one side of the seam (case F)
    dart_id = work.new_id("dart")
    _claim_cells(work, panel, footprint, dart_id)
    seam = work.seams[work.edges[base_segs[0].edge_id].seam_id]
    side = work.edges[base_segs[0].edge_id].side
    ids = work.seam_side_ids(seam, side)
    later = max(base_segs, key=lambda s: ids.index(s.id))
    later.active = False
    later.inactive_reason = "dart"
    orient = "v" if u == (1, 0) else "h"
    work.features.append(FeatureRecord(
        kind="dart",
        params={"panel": panel.id, "anchor": list(anchor),
                "orientation": orient,
                "width_cm": width_cm, "height_units": n,
                "variant": "triangle_seam", "modules": 1, "dart_id": dart_id,
                "pieces": [_piece(panel.id, footprint, "wedge", orient,
                                  base=base_side)]},
        revision=work.revision + 1))


def _owners(work: Pattern, segs) -> list[Cell]:
    return [work.cell_owner_of_segment(s) for s in segs]


def _extend_footprint(base_cells: list[Cell], u, descend: int, n: int) -> list[Cell]:
    out = []
    perp = (u[1], u[0])
    for c in base_cells:
        for k in range(n):
            out.append((c[0] + descend * k * perp[0], c[1] + descend * k * perp[1]))
    return out


def _space_across(work: Pattern, partner_panel: Panel, partners, u, n: int):
    cells = _owners(work, partners)
    if len(set(cells)) != len(cells):
        return False, 0
    perp = (u[1], u[0])
    for descend in (1, -1):
        fp = _extend_footprint(cells, u, descend, n)
        if all(c in partner_panel.cells and partner_panel.cells[c].kind == FOUNDATION
               for c in fp):
            return True, descend
    return False, 0


def _deactivate_later_ordinal(work: Pattern, seam, base_segs, partners) -> None:
    ids_a = work.seam_side_ids(seam, "a")
    ids_b = work.seam_side_ids(seam, "b")
    side_of = {work.edges[base_segs[0].edge_id].side: base_segs,
               work.edges[partners[0].edge_id].side: partners}
    for side, segs in side_of.items():
        ids = ids_a if side == "a" else ids_b
        later = max(segs, key=lambda s: ids.index(s.id))
        later.active = False
        later.inactive_reason = "dart"
