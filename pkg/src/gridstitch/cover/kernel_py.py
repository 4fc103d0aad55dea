"""Pure-Python exact-cover kernel: branch and bound over square placements.

Branches on the lowest-index uncovered cell, trying its candidates largest
first. Prunes with the area bound and a transposition table of visited
uncovered-sets. The compiled kernel in _kernel.pyx mirrors this search
exactly; both produce identical selections on identical input.
"""

from __future__ import annotations

import sys
import time

OPTIMAL, INFEASIBLE, TIMEOUT = 0, 1, 2

MEMO_LIMIT = 1 << 21


def solve_min_cover(n_cells, cand_covers, cand_sizes, size_caps, cell_cands,
                    max_piece_cells, deadline=None):
    """Returns (status, best_count, best_selection, nodes, lower_bound)."""
    full = (1 << n_cells) - 1
    if n_cells == 0:
        return OPTIMAL, 0, [], 0, 0
    sys.setrecursionlimit(max(10000, n_cells * 4))

    n_sizes = len(size_caps)
    counts = [0] * n_sizes
    use_memo = all(c < 0 for c in size_caps)
    memo: dict[int, int] = {}

    best = n_cells + 1
    best_sel: list[int] | None = None
    sel: list[int] = []
    nodes = 0
    timed_out = False
    root_lb = (n_cells + max_piece_cells - 1) // max_piece_cells

    greedy_sel = _greedy(full, cand_covers, cand_sizes, size_caps, cell_cands)
    if greedy_sel is not None:
        best = len(greedy_sel)
        best_sel = list(greedy_sel)

    def dfs(uncovered: int, used: int) -> None:
        nonlocal best, best_sel, nodes, timed_out
        if timed_out:
            return
        nodes += 1
        if deadline is not None and nodes % 2048 == 0:
            if time.monotonic() > deadline:
                timed_out = True
                return
        if use_memo:
            prev = memo.get(uncovered)
            if prev is not None and prev <= used:
                return
            if len(memo) < MEMO_LIMIT:
                memo[uncovered] = used
        cell = (uncovered & -uncovered).bit_length() - 1
        for cand in cell_cands[cell]:
            cover = cand_covers[cand]
            if cover & uncovered != cover:
                continue
            si = cand_sizes[cand]
            cap = size_caps[si]
            if 0 <= cap <= counts[si]:
                continue
            rest = uncovered & ~cover
            if rest == 0:
                if used + 1 < best:
                    best = used + 1
                    best_sel = sel + [cand]
                continue
            lb = (rest.bit_count() + max_piece_cells - 1) // max_piece_cells
            if used + 1 + lb >= best:
                continue
            counts[si] += 1
            sel.append(cand)
            dfs(rest, used + 1)
            sel.pop()
            counts[si] -= 1
            if timed_out:
                return

    if best > root_lb:  # skip search when the greedy incumbent is provably optimal
        dfs(full, 0)
    if timed_out:
        return TIMEOUT, (best if best_sel else -1), best_sel, nodes, root_lb
    if best_sel is None:
        return INFEASIBLE, -1, None, nodes, root_lb
    return OPTIMAL, best, best_sel, nodes, best


def _greedy(full, cand_covers, cand_sizes, size_caps, cell_cands):
    counts = [0] * len(size_caps)
    uncovered = full
    sel = []
    while uncovered:
        cell = (uncovered & -uncovered).bit_length() - 1
        for cand in cell_cands[cell]:
            cover = cand_covers[cand]
            if cover & uncovered != cover:
                continue
            si = cand_sizes[cand]
            cap = size_caps[si]
            if 0 <= cap <= counts[si]:
                continue
            counts[si] += 1
            sel.append(cand)
            uncovered &= ~cover
            break
        else:
            return None
    return sel
