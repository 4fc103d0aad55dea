"""Integer-program backend over HiGHS via scipy.

Plugs in behind the same kernel interface as the branch-and-bound solvers:
binary variable per candidate, exact-coverage equality per cell, a supply
row per finite size cap, objective = number of selected squares.
"""

from __future__ import annotations

import time

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

from .kernel_py import INFEASIBLE, OPTIMAL, TIMEOUT


def solve_min_cover(n_cells, cand_covers, cand_sizes, size_caps, cell_cands,
                    max_piece_cells, deadline=None):
    n_cands = len(cand_covers)
    if n_cells == 0:
        return OPTIMAL, 0, [], 0, 0
    if n_cands == 0:
        return INFEASIBLE, -1, None, 0, 0

    rows, cols = [], []
    for cand, cover in enumerate(cand_covers):
        m = cover
        while m:
            low = m & -m
            rows.append(low.bit_length() - 1)
            cols.append(cand)
            m ^= low
    a_eq = sparse.csr_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(n_cells, n_cands)
    )
    constraints = [LinearConstraint(a_eq, lb=1, ub=1)]

    finite = [(si, cap) for si, cap in enumerate(size_caps) if cap >= 0]
    if finite:
        srows, scols = [], []
        for r, (si, _) in enumerate(finite):
            for cand in range(n_cands):
                if cand_sizes[cand] == si:
                    srows.append(r)
                    scols.append(cand)
        a_sup = sparse.csr_matrix(
            (np.ones(len(srows)), (srows, scols)), shape=(len(finite), n_cands)
        )
        ub = np.array([cap for _, cap in finite], dtype=float)
        constraints.append(LinearConstraint(a_sup, lb=0, ub=ub))

    options = {}
    if deadline is not None:
        options["time_limit"] = max(deadline - time.monotonic(), 0.01)
    res = milp(
        c=np.ones(n_cands),
        integrality=np.ones(n_cands),
        bounds=Bounds(0, 1),
        constraints=constraints,
        options=options,
    )
    nodes = int(getattr(res, "mip_node_count", 0) or 0)
    if res.status == 0:
        sel = sorted(np.flatnonzero(res.x > 0.5).tolist())
        count = len(sel)
        return OPTIMAL, count, sel, nodes, count
    if res.status == 2:
        return INFEASIBLE, -1, None, nodes, 0
    if res.x is not None:
        sel = sorted(np.flatnonzero(res.x > 0.5).tolist())
        bound = int(np.ceil(getattr(res, "mip_dual_bound", 0) or 0))
        return TIMEOUT, len(sel), sel, nodes, bound
    return TIMEOUT, -1, None, nodes, 0
