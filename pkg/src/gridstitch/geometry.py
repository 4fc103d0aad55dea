"""Integer grid geometry: rectilinear outlines, rasterization, strips.

All coordinates are integers in base-unit steps; physical lengths appear only
at export. A cell is the unit square whose lower-left corner is (i, j).
"""

from __future__ import annotations

from .errors import (
    DisconnectionHazard,
    MultiComponent,
    NotClosed,
    OffGrid,
    SelfIntersecting,
)

Point = tuple[int, int]
Cell = tuple[int, int]

DIRS = {"left": (-1, 0), "right": (1, 0), "down": (0, -1), "up": (0, 1)}
OPPOSITE = {"left": "right", "right": "left", "up": "down", "down": "up"}

# unit boundary edge of a cell, per side, as an ordered (a, b) point pair
_SIDE_POINTS = {
    "down": lambda i, j: ((i, j), (i + 1, j)),
    "up": lambda i, j: ((i, j + 1), (i + 1, j + 1)),
    "left": lambda i, j: ((i, j), (i, j + 1)),
    "right": lambda i, j: ((i + 1, j), (i + 1, j + 1)),
}


def cell_side_points(cell: Cell, side: str) -> tuple[Point, Point]:
    return _SIDE_POINTS[side](*cell)


def validate_outline(outline) -> tuple[Point, ...]:
    """Check a closed rectilinear loop and return it normalized.

    Normal form: integer vertices, collinear points merged, counterclockwise,
    starting at the lexicographically smallest vertex. A trailing repeat of
    the first vertex is accepted and dropped.
    """
    pts = [tuple(p) for p in outline]
    if len(pts) >= 2 and pts[0] == pts[-1]:
        pts = pts[:-1]
    if len(pts) < 4:
        raise NotClosed("outline needs at least 4 vertices")
    for p in pts:
        if len(p) != 2 or not all(isinstance(c, int) or float(c).is_integer() for c in p):
            raise OffGrid(f"vertex {p} is not on the unit grid")
    pts = [(int(x), int(y)) for x, y in pts]

    # axis-aligned edges only, no zero-length edges
    n = len(pts)
    for k in range(n):
        a, b = pts[k], pts[(k + 1) % n]
        if a == b:
            raise NotClosed(f"zero-length edge at {a}")
        if a[0] != b[0] and a[1] != b[1]:
            raise OffGrid(f"edge {a}-{b} is not axis-aligned")

    merged = _merge_collinear(pts)
    _check_simple(merged)
    if _signed_area2(merged) < 0:
        merged = [merged[0]] + merged[:0:-1]
    start = min(range(len(merged)), key=lambda k: merged[k])
    merged = merged[start:] + merged[:start]
    return tuple(merged)


def _merge_collinear(pts: list[Point]) -> list[Point]:
    out = []
    n = len(pts)
    for k in range(n):
        prev, cur, nxt = pts[(k - 1) % n], pts[k], pts[(k + 1) % n]
        if (prev[0] == cur[0] == nxt[0]) or (prev[1] == cur[1] == nxt[1]):
            continue
        out.append(cur)
    if len(out) < 4:
        raise NotClosed("outline encloses no area")
    return out


def _signed_area2(pts: list[Point]) -> int:
    s = 0
    n = len(pts)
    for k in range(n):
        (x1, y1), (x2, y2) = pts[k], pts[(k + 1) % n]
        s += x1 * y2 - x2 * y1
    return s


def _check_simple(pts: list[Point]) -> None:
    """Reject self-intersections and repeated vertex visits."""
    if len(set(pts)) != len(pts):
        raise SelfIntersecting("outline revisits a vertex")
    n = len(pts)
    segs = [(pts[k], pts[(k + 1) % n]) for k in range(n)]

    def span(seg):
        (x1, y1), (x2, y2) = seg
        return (min(x1, x2), min(y1, y2)), (max(x1, x2), max(y1, y2))

    for a in range(n):
        for b in range(a + 1, n):
            adjacent = (b == a + 1) or (a == 0 and b == n - 1)
            (alo, ahi) = span(segs[a])
            (blo, bhi) = span(segs[b])
            if ahi[0] < blo[0] or bhi[0] < alo[0] or ahi[1] < blo[1] or bhi[1] < alo[1]:
                continue
            if adjacent:
                # sharing the single joint vertex is fine; any larger overlap
                # would have been caught by the collinear merge or bbox test
                horiz_a = segs[a][0][1] == segs[a][1][1]
                horiz_b = segs[b][0][1] == segs[b][1][1]
                if horiz_a == horiz_b:
                    raise SelfIntersecting("outline doubles back on itself")
                continue
            raise SelfIntersecting(f"edges {segs[a]} and {segs[b]} intersect")


def rasterize(outline: tuple[Point, ...]) -> set[Cell]:
    """Interior unit cells of a validated outline (scanline parity)."""
    verticals = []
    n = len(outline)
    for k in range(n):
        a, b = outline[k], outline[(k + 1) % n]
        if a[0] == b[0]:
            verticals.append((a[0], min(a[1], b[1]), max(a[1], b[1])))
    ys = [p[1] for p in outline]
    cells: set[Cell] = set()
    for j in range(min(ys), max(ys)):
        yc = j + 0.5
        xs = sorted(x for x, y0, y1 in verticals if y0 < yc < y1)
        for k in range(0, len(xs), 2):
            for i in range(xs[k], xs[k + 1]):
                cells.add((i, j))
    if not cells:
        raise NotClosed("outline encloses no cells")
    if not is_connected(cells):
        raise MultiComponent("outline interior is not a single connected region")
    return cells


def is_connected(cells: set[Cell]) -> bool:
    if not cells:
        return True
    seen = set()
    stack = [next(iter(cells))]
    while stack:
        c = stack.pop()
        if c in seen:
            continue
        seen.add(c)
        i, j = c
        for di, dj in DIRS.values():
            nb = (i + di, j + dj)
            if nb in cells and nb not in seen:
                stack.append(nb)
    return len(seen) == len(cells)


def components(cells: set[Cell]) -> list[set[Cell]]:
    remaining = set(cells)
    out = []
    while remaining:
        seed = min(remaining)
        comp = set()
        stack = [seed]
        while stack:
            c = stack.pop()
            if c in comp:
                continue
            comp.add(c)
            i, j = c
            for di, dj in DIRS.values():
                nb = (i + di, j + dj)
                if nb in remaining and nb not in comp:
                    stack.append(nb)
        remaining -= comp
        out.append(comp)
    return out


def boundary_sides(cells: set[Cell]) -> list[tuple[Cell, str]]:
    """Every (cell, side) whose unit edge lies on the region boundary."""
    out = []
    for (i, j) in cells:
        for side, (di, dj) in DIRS.items():
            if (i + di, j + dj) not in cells:
                out.append(((i, j), side))
    return out


def trace_outline(cells: set[Cell]) -> tuple[Point, ...]:
    """Trace the outer boundary loop of a connected, hole-free cell set.

    Inverse of rasterize for simple regions; used for the round-trip check.
    """
    edges: dict[Point, Point] = {}
    for (i, j) in cells:
        if (i, j - 1) not in cells:
            edges[(i, j)] = (i + 1, j)
        if (i, j + 1) not in cells:
            edges[(i + 1, j + 1)] = (i, j + 1)
        if (i - 1, j) not in cells:
            edges[(i, j + 1)] = (i, j)
        if (i + 1, j) not in cells:
            edges[(i + 1, j)] = (i + 1, j + 1)
    start = min(edges)
    loop = [start]
    cur = edges[start]
    while cur != start:
        loop.append(cur)
        cur = edges[cur]
    return validate_outline(loop)


# -- strips --------------------------------------------------------------------


def strip_cells(cells: set[Cell], cell: Cell, axis: str) -> list[Cell]:
    """Maximal connected run through `cell` along a row or column.

    axis "col" is a vertical run (expansion changes panel width);
    axis "row" is a horizontal run (expansion changes panel height).
    """
    if cell not in cells:
        raise ValueError(f"cell {cell} not in panel")
    if axis not in ("row", "col"):
        raise ValueError(f"axis must be 'row' or 'col', got {axis!r}")
    step = (0, 1) if axis == "col" else (1, 0)
    run = [cell]
    for sign in (1, -1):
        cur = cell
        while True:
            cur = (cur[0] + sign * step[0], cur[1] + sign * step[1])
            if cur not in cells:
                break
            run.append(cur)
    run.sort()
    return run


class RegionShift:
    """Plan for inserting or deleting a strip: which cells move where.

    Insertion duplicates the strip beside itself and shifts everything the
    flood fill reaches from the insertion side. The plan is rejected when the
    shift would tear an adjacency that the duplicate cannot bridge, collide
    moved cells with stationary ones, or fuse faces that were separate.
    """

    def __init__(self, strip: list[Cell], moved: dict[Cell, Cell], dup: list[Cell]):
        self.strip = strip
        self.moved = moved  # old position -> new position
        self.dup = dup      # new duplicate cells, aligned index-wise with strip


def _flood_from(cells: set[Cell], seeds: set[Cell], blocked: set[Cell]) -> set[Cell]:
    region = set()
    stack = [s for s in seeds if s in cells]
    while stack:
        c = stack.pop()
        if c in region or c in blocked:
            continue
        region.add(c)
        i, j = c
        for di, dj in DIRS.values():
            nb = (i + di, j + dj)
            if nb in cells and nb not in region and nb not in blocked:
                stack.append(nb)
    return region


def plan_insert(cells: set[Cell], strip: list[Cell], side: str) -> RegionShift:
    """Plan duplicating `strip` on `side`, shifting the flooded region away."""
    d = DIRS[side]
    strip_set = set(strip)
    seeds = {(c[0] + d[0], c[1] + d[1]) for c in strip}
    region = _flood_from(cells, seeds, strip_set)
    moved = {c: (c[0] + d[0], c[1] + d[1]) for c in region}
    dup = [(c[0] + d[0], c[1] + d[1]) for c in strip]
    _validate_shift(cells, strip_set, region, moved, set(dup), d)
    return RegionShift(strip, moved, dup)


def plan_delete(cells: set[Cell], strip: list[Cell], side: str) -> RegionShift:
    """Plan removing `strip`, shifting the region on `side` back over it."""
    d = DIRS[side]
    back = (-d[0], -d[1])
    strip_set = set(strip)
    seeds = {(c[0] + d[0], c[1] + d[1]) for c in strip}
    region = _flood_from(cells, seeds, strip_set)
    moved = {c: (c[0] + back[0], c[1] + back[1]) for c in region}
    _validate_unshift(cells, strip_set, region, moved, d)
    return RegionShift(strip, moved, [])


def _adjacencies(cells: set[Cell]) -> set[frozenset]:
    pairs = set()
    for (i, j) in cells:
        for nb in ((i + 1, j), (i, j + 1)):
            if nb in cells:
                pairs.add(frozenset(((i, j), nb)))
    return pairs


def _validate_shift(cells, strip_set, region, moved, dup_set, d):
    stay = cells - region
    new_region = set(moved.values())
    if new_region & stay:
        raise DisconnectionHazard("shifted cells collide with stationary cells")
    if dup_set & stay or dup_set & new_region:
        raise DisconnectionHazard("duplicate strip position is blocked")

    new_cells = stay | new_region | dup_set
    relocate = {c: c for c in stay}
    relocate.update(moved)

    old_pairs = _adjacencies(cells)
    new_pairs = _adjacencies(new_cells)

    # every old adjacency must survive, except strip->region across the
    # insertion face, which the duplicate bridges
    for pair in old_pairs:
        a, b = tuple(pair)
        na, nb = relocate[a], relocate[b]
        if frozenset((na, nb)) in new_pairs:
            continue
        t, r = (a, b) if a in strip_set else (b, a)
        if t in strip_set and r in region and (t[0] + d[0], t[1] + d[1]) == r:
            continue  # bridged via the duplicate cell
        raise DisconnectionHazard(f"insertion tears {a}-{b}")

    # no new contacts besides strip|dup|shifted bridges
    expected = set()
    for t in strip_set:
        dup = (t[0] + d[0], t[1] + d[1])
        expected.add(frozenset((t, dup)))
        nb_shift = (dup[0] + d[0], dup[1] + d[1])
        if nb_shift in new_region:
            expected.add(frozenset((dup, nb_shift)))
    for a, b in ((x, y) for x in dup_set for y in dup_set):
        if a < b and _adjacent(a, b):
            expected.add(frozenset((a, b)))
    surviving = set()
    for pair in old_pairs:
        a, b = tuple(pair)
        surviving.add(frozenset((relocate[a], relocate[b])))
    for pair in new_pairs:
        if pair not in surviving and pair not in expected:
            a, b = tuple(pair)
            raise DisconnectionHazard(f"insertion fuses {a} and {b}")


def _validate_unshift(cells, strip_set, region, moved, d):
    stay = cells - region - strip_set
    new_region = set(moved.values())
    if new_region & stay:
        raise DisconnectionHazard("deletion collides cells")
    new_cells = stay | new_region
    relocate = {c: c for c in stay}
    relocate.update(moved)

    old_pairs = _adjacencies(cells)
    new_pairs = _adjacencies(new_cells)
    for pair in old_pairs:
        a, b = tuple(pair)
        if a in strip_set or b in strip_set:
            continue  # strip adjacencies vanish with the strip
        na, nb = relocate[a], relocate[b]
        if frozenset((na, nb)) not in new_pairs:
            raise DisconnectionHazard(f"deletion tears {a}-{b}")
    expected = set()
    for t in strip_set:
        src = (t[0] + d[0], t[1] + d[1])
        far = (t[0] - d[0], t[1] - d[1])
        if src in region and far in stay:
            expected.add(frozenset((t, far)))  # gap closes here
    surviving = set()
    for pair in old_pairs:
        a, b = tuple(pair)
        if a in strip_set or b in strip_set:
            continue
        surviving.add(frozenset((relocate[a], relocate[b])))
    for pair in new_pairs:
        if pair not in surviving and pair not in expected:
            a, b = tuple(pair)
            raise DisconnectionHazard(f"deletion fuses {a} and {b}")
    if new_cells and not is_connected(new_cells):
        raise DisconnectionHazard("deletion disconnects the panel")


def _adjacent(a: Cell, b: Cell) -> bool:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1
