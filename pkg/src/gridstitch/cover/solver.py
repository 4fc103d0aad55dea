"""Minimal square-cover decomposition of pattern panels.

Foundation cells are covered exactly once by squares from the supply; pleat
cells carry pre-assigned unit pleat modules and dart cells belong to their
dart modules, so both are excluded from the covering. Connected regions are
independent subproblems and are solved separately whenever the supply does
not couple them.

Kernels: a branch-and-bound pair (compiled when built, pure Python always)
and a HiGHS integer-program backend. "auto" routes big regions to the
integer program and everything else to the fastest available local kernel.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .. import geometry
from ..errors import Infeasible, InvalidConfig
from ..pattern import DART_HOLE, FOUNDATION, PLEAT, Pattern
from . import kernel_py
from .candidates import enumerate_candidates

try:
    from . import _kernel as kernel_c
    HAVE_COMPILED = True
except ImportError:
    kernel_c = None
    HAVE_COMPILED = False

OPTIMAL, INFEASIBLE, TIMEOUT = (
    kernel_py.OPTIMAL, kernel_py.INFEASIBLE, kernel_py.TIMEOUT,
)

AUTO_MILP_CELLS = 180  # regions this big go to the integer program


@dataclass(frozen=True)
class ModuleSupply:
    """Available foundation squares: size -> count, None meaning unbounded."""

    counts: tuple = ((1, None), (2, None), (3, None), (4, None))

    @classmethod
    def of_sizes(cls, *sizes):
        return cls(tuple((s, None) for s in sorted(sizes)))

    @classmethod
    def from_dict(cls, data: dict) -> "ModuleSupply":
        items = []
        for key, val in sorted(data.items(), key=lambda kv: int(kv[0])):
            items.append((int(key), None if val is None else int(val)))
        return cls(tuple(items)).validate()

    def to_dict(self) -> dict:
        return {str(s): c for s, c in self.counts}

    def validate(self) -> "ModuleSupply":
        sizes = [s for s, _ in self.counts]
        if not sizes or any(s < 1 for s in sizes):
            raise InvalidConfig("supply sizes must be integers >= 1")
        if len(set(sizes)) != len(sizes):
            raise InvalidConfig("duplicate supply size")
        if all(c == 0 for _, c in self.counts):
            raise InvalidConfig("supply has no available modules")
        return self

    @property
    def sizes(self) -> list[int]:
        return [s for s, c in self.counts if c is None or c > 0]

    def cap(self, size: int):
        for s, c in self.counts:
            if s == size:
                return c
        return 0

    @property
    def bounded(self) -> bool:
        return any(c is not None for _, c in self.counts)


@dataclass
class Placement:
    panel_id: int
    role: str  # foundation | pleat | dart_pair
    size: int = 1
    at: tuple = (0, 0)
    cells: list = field(default_factory=list)
    dart_id: int | None = None

    def to_dict(self) -> dict:
        out = {"panel": self.panel_id, "role": self.role, "size": self.size,
               "at": list(self.at), "cells": [list(c) for c in self.cells]}
        if self.dart_id:
            out["dart"] = self.dart_id
        return out


@dataclass
class Assembly:
    placements: list
    module_count: int
    optimal: bool
    lower_bound: int
    stats: dict

    def foundation_counts(self) -> dict:
        out: dict[int, int] = {}
        for pl in self.placements:
            if pl.role == "foundation":
                out[pl.size] = out.get(pl.size, 0) + 1
        return out

    def to_dict(self) -> dict:
        return {
            "format_version": 1,
            "kind": "assembly",
            "placements": [p.to_dict() for p in self.placements],
            "module_count": self.module_count,
            "optimal": self.optimal,
            "lower_bound": self.lower_bound,
            "stats": self.stats,
        }


def _kernel_for(backend: str, n_cells: int):
    if backend == "milp":
        from . import milp
        return milp.solve_min_cover, "milp"
    if backend == "bb-py":
        return kernel_py.solve_min_cover, "bb-py"
    if backend == "bb-c":
        if not HAVE_COMPILED:
            raise InvalidConfig("compiled kernel not built; run setup.py build_ext")
        return kernel_c.solve_min_cover, "bb-c"
    if backend == "bb":
        if HAVE_COMPILED:
            return kernel_c.solve_min_cover, "bb-c"
        return kernel_py.solve_min_cover, "bb-py"
    if backend == "auto":
        if n_cells > AUTO_MILP_CELLS:
            from . import milp
            return milp.solve_min_cover, "milp"
        return _kernel_for("bb", n_cells)
    raise InvalidConfig(f"unknown solver backend {backend!r}")


def solve_region(cells, supply: ModuleSupply, budget_s=60.0, backend="auto"):
    """Cover one cell region; returns (status, count, placements, stats)."""
    cells = set(cells)
    order = sorted(cells)
    index = {c: k for k, c in enumerate(order)}
    sizes = supply.sizes
    cands = enumerate_candidates(cells, sizes)
    size_classes = sorted(set(sizes), reverse=True)
    class_of = {s: k for k, s in enumerate(size_classes)}
    caps = [-1 if supply.cap(s) is None else supply.cap(s) for s in size_classes]

    cand_covers, cand_sizes = [], []
    for size, i, j in cands:
        mask = 0
        for di in range(size):
            for dj in range(size):
                mask |= 1 << index[(i + di, j + dj)]
        cand_covers.append(mask)
        cand_sizes.append(class_of[size])
    cell_cands = [[] for _ in order]
    for cid, mask in enumerate(cand_covers):
        m = mask
        while m:
            low = m & -m
            cell_cands[low.bit_length() - 1].append(cid)
            m ^= low

    fn, used_backend = _kernel_for(backend, len(order))
    deadline = None if budget_s is None else time.monotonic() + budget_s
    t0 = time.monotonic()
    status, count, sel, nodes, bound = fn(
        len(order), cand_covers, cand_sizes, caps, cell_cands,
        max(sizes) ** 2, deadline,
    )
    elapsed = time.monotonic() - t0
    placements = None
    if sel is not None:
        placements = [cands[k] for k in sel]
    stats = {
        "backend": used_backend,
        "variables": len(cands),
        "cells": len(order),
        "nodes": nodes,
        "runtime_s": elapsed,
    }
    return status, count, placements, bound, stats


def foundation_regions(pattern: Pattern):
    """(panel_id, component_cells) for every connected foundation region."""
    out = []
    for pid in sorted(pattern.panels):
        panel = pattern.panels[pid]
        foundation = {
            c for c, d in panel.cells.items() if d.kind == FOUNDATION
        }
        for comp in sorted(geometry.components(foundation), key=min):
            out.append((pid, comp))
    return out


def solve_cover(pattern: Pattern, supply: ModuleSupply | None = None,
                budget_s: float = 60.0, backend: str = "auto") -> Assembly:
    """Decompose every panel into the fewest modules the supply allows.

    Pre-assigned pleat and dart modules are fixed; foundation regions are
    covered optimally. Independent regions are solved concurrently unless a
    finite supply couples them, in which case one joint model is solved.
    Raises Infeasible when the supply cannot tile the pattern; a budget
    overrun returns the incumbent flagged non-optimal.
    """
    supply = (supply or ModuleSupply()).validate()
    placements: list[Placement] = []
    for pid in sorted(pattern.panels):
        panel = pattern.panels[pid]
        darts: dict[int, list] = {}
        for cell in sorted(panel.cells):
            data = panel.cells[cell]
            if data.kind == PLEAT:
                placements.append(Placement(
                    panel_id=pid, role="pleat", size=1, at=cell, cells=[cell]))
            elif data.kind == DART_HOLE:
                darts.setdefault(data.dart_id, []).append(cell)
        for dart_id in sorted(darts):
            placements.append(Placement(
                panel_id=pid, role="dart_pair", size=0, at=min(darts[dart_id]),
                cells=sorted(darts[dart_id]), dart_id=dart_id))

    dart_modules = sum(
        f.params.get("modules", 1) for f in pattern.features if f.kind == "dart"
    )
    pleat_modules = sum(1 for p in placements if p.role == "pleat")

    regions = foundation_regions(pattern)
    stats = {"regions": [], "backend": backend}
    total = 0
    optimal = True
    lower = 0

    def run(args):
        pid, comp = args
        return pid, comp, solve_region(comp, supply, budget_s, backend)

    if supply.bounded and len(regions) > 1:
        # a finite supply couples the regions: solve them as one joint model
        merged: dict = {}
        shift = 0
        for pid, comp in regions:
            min_i = min(c[0] for c in comp)
            for c in comp:
                merged[(c[0] - min_i + shift, c[1])] = (pid, c)
            shift += max(c[0] for c in comp) - min_i + 2
        status, count, placed, bound, rstats = solve_region(
            set(merged), supply, budget_s, backend)
        stats["regions"].append(rstats)
        lower += max(bound, 0)
        if status == INFEASIBLE:
            raise Infeasible("supply cannot tile the pattern")
        if status == TIMEOUT:
            optimal = False
        if placed is None:
            raise Infeasible("no tiling found within the budget")
        total += count
        for size, i, j in placed:
            pid, orig = merged[(i, j)]
            placements.append(Placement(
                panel_id=pid, role="foundation", size=size, at=orig,
                cells=[(orig[0] + di, orig[1] + dj)
                       for di in range(size) for dj in range(size)]))
    else:
        with ThreadPoolExecutor(max_workers=min(8, max(1, len(regions)))) as pool:
            results = list(pool.map(run, regions))
        for pid, comp, (status, count, placed, bound, rstats) in results:
            stats["regions"].append(rstats)
            lower += max(bound, 0)
            if status == INFEASIBLE:
                raise Infeasible(f"supply cannot tile panel {pid}")
            if status == TIMEOUT:
                optimal = False
            if placed is None:
                raise Infeasible(f"no tiling of panel {pid} within the budget")
            total += count
            for size, i, j in placed:
                placements.append(Placement(
                    panel_id=pid, role="foundation", size=size, at=(i, j),
                    cells=[(i + di, j + dj)
                           for di in range(size) for dj in range(size)]))

    placements.sort(key=lambda p: (p.panel_id, {"foundation": 0, "pleat": 1,
                                                "dart_pair": 2}[p.role],
                                   -p.size, p.at))
    module_count = total + pleat_modules + dart_modules
    verify_assembly(pattern, placements)
    stats["runtime_s"] = sum(r["runtime_s"] for r in stats["regions"])
    stats["variables"] = sum(r["variables"] for r in stats["regions"])
    return Assembly(
        placements=placements,
        module_count=module_count,
        optimal=optimal,
        lower_bound=lower + pleat_modules + dart_modules,
        stats=stats,
    )


def verify_assembly(pattern: Pattern, placements) -> None:
    """Cell-level accounting: disjoint, in-bounds, and exactly covering."""
    for pid in sorted(pattern.panels):
        panel = pattern.panels[pid]
        seen: dict = {}
        for pl in placements:
            if pl.panel_id != pid:
                continue
            for c in pl.cells:
                if c in seen:
                    raise Infeasible(f"cell {c} covered twice in panel {pid}")
                seen[c] = pl.role
        if set(seen) != set(panel.cells):
            missing = set(panel.cells) - set(seen)
            extra = set(seen) - set(panel.cells)
            raise Infeasible(
                f"panel {pid} coverage mismatch: missing {sorted(missing)[:4]}, "
                f"extra {sorted(extra)[:4]}"
            )
        for c, role in seen.items():
            kind = panel.cells[c].kind
            want = {"foundation": FOUNDATION, "pleat": PLEAT,
                    "dart_pair": DART_HOLE}[role]
            if kind != want:
                raise Infeasible(f"cell {c} kind {kind} covered by {role}")
