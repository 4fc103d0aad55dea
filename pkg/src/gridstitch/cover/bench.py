"""Decomposition benchmarks: runtime versus board area, irregularity, and
panel count, plus a compiled-versus-pure kernel comparison."""

from __future__ import annotations

import random
import time

from .solver import ModuleSupply, OPTIMAL, solve_region


def random_removal_board(n: int, removal: float, seed: int):
    """n-by-n board with a seeded random fraction of unit cells removed."""
    cells = sorted((i, j) for i in range(n) for j in range(n))
    k = round(removal * len(cells))
    rng = random.Random(seed)
    removed = set(rng.sample(cells, k)) if k else set()
    return set(cells) - removed


def disjoint_panels_board(n: int, count: int):
    """`count` disjoint n-by-n components on one sheet."""
    cells = set()
    for k in range(count):
        x0 = k * (n + 2)
        cells |= {(x0 + i, j) for i in range(n) for j in range(n)}
    return cells


def run_instance(cells, supply=None, budget_s=120.0, backend="auto", label=""):
    supply = supply or ModuleSupply()
    t0 = time.monotonic()
    status, count, placed, bound, stats = solve_region(
        cells, supply, budget_s, backend)
    elapsed = time.monotonic() - t0
    return {
        "instance": label,
        "cells": len(cells),
        "variables": stats["variables"],
        "runtime_ms": round(elapsed * 1000.0, 3),
        "modules": count,
        "optimal": status == OPTIMAL,
        "backend": stats["backend"],
    }


def benchmark_suite(sizes, removals, seeds, budget_s=120.0, backend="auto"):
    """Rows of (instance, cells, variables, runtime ms, modules, optimal)."""
    rows = []
    for n in sizes:
        for removal in removals:
            for seed in seeds:
                cells = random_removal_board(n, removal, seed)
                label = f"{n}x{n}-r{int(removal * 100):02d}-s{seed}"
                rows.append(run_instance(cells, budget_s=budget_s,
                                         backend=backend, label=label))
    return rows


def panel_scaling(n=8, counts=(1, 2, 4, 8), budget_s=120.0, backend="auto",
                  repeats=3):
    """Median runtime for K disjoint panels, K in `counts`."""
    rows = []
    for k in counts:
        cells = disjoint_panels_board(n, k)
        times = []
        last = None
        for _ in range(repeats):
            last = run_instance(cells, budget_s=budget_s, backend=backend,
                                label=f"{k}x({n}x{n})")
            times.append(last["runtime_ms"])
        times.sort()
        last["runtime_ms"] = times[len(times) // 2]
        rows.append(last)
    return rows


def kernel_comparison(sizes=(10, 11, 12, 13), budget_s=60.0):
    """Same instances on the pure and compiled kernels, when both exist."""
    from .solver import HAVE_COMPILED

    backends = ["bb-py"] + (["bb-c"] if HAVE_COMPILED else [])
    rows = []
    for n in sizes:
        cells = random_removal_board(n, 0.0, 0)
        entry = {"instance": f"{n}x{n}", "cells": len(cells)}
        for backend in backends:
            row = run_instance(cells, budget_s=budget_s, backend=backend)
            entry[backend + "_ms"] = row["runtime_ms"]
            entry["modules"] = row["modules"]
        if len(backends) == 2:
            entry["speedup"] = round(
                entry["bb-py_ms"] / max(entry["bb-c_ms"], 1e-6), 2)
        rows.append(entry)
    return rows


def linear_fit(xs, ys):
    """Least-squares slope/intercept and the coefficient of determination."""
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx if sxx else 0.0
    intercept = my - slope * mx
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - my) ** 2 for y in ys)
    r2 = 1.0 - ss_res / ss_tot if ss_tot else 1.0
    return slope, intercept, r2


def format_table(rows) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    widths = {c: max(len(c), max(len(str(r.get(c, ""))) for r in rows)) for c in cols}
    lines = ["\t".join(c.ljust(widths[c]) for c in cols)]
    for r in rows:
        lines.append("\t".join(str(r.get(c, "")).ljust(widths[c]) for c in cols))
    return "\n".join(lines) + "\n"


def render_report_svg(rows, width=640, bar_h=18) -> str:
    """Simple horizontal bar chart of runtimes per instance."""
    if not rows:
        return '<svg xmlns="http://www.w3.org/2000/svg" width="1" height="1"/>'
    max_ms = max(r["runtime_ms"] for r in rows) or 1.0
    pad = 160
    height = bar_h * len(rows) + 30
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" font-family="monospace" font-size="11">'
    ]
    for k, r in enumerate(rows):
        y = 20 + k * bar_h
        w = (width - pad - 80) * r["runtime_ms"] / max_ms
        color = "#4477aa" if r.get("optimal", True) else "#cc3311"
        parts.append(
            f'<text x="4" y="{y + 12}">{r["instance"]}</text>'
            f'<rect x="{pad}" y="{y + 2}" width="{w:.1f}" height="{bar_h - 6}" '
            f'fill="{color}"/>'
            f'<text x="{pad + w + 4:.1f}" y="{y + 12}">{r["runtime_ms"]:.0f} ms'
            f' / {r["modules"]} modules</text>'
        )
    parts.append("</svg>")
    return "".join(parts)
