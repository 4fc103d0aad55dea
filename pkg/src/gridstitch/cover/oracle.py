"""Independent brute-force minimum-cover oracle for testing.

Exhaustive depth-first cover with exact memoization and no pruning bounds;
shares no search logic with the solver kernels. Limited to small boards.
"""

from __future__ import annotations

from ..errors import TooLarge
from .candidates import enumerate_candidates

MAX_CELLS = 36


def oracle_min_cover(cells, sizes, supply=None):
    """Exact minimum module count to tile `cells` with the given square sizes.

    `supply` optionally maps size -> available count (None entry = unbounded).
    Returns None when no exact cover exists.
    """
    cells = set(cells)
    if len(cells) > MAX_CELLS:
        raise TooLarge(f"oracle handles at most {MAX_CELLS} cells, got {len(cells)}")
    if not cells:
        return 0
    order = sorted(cells)
    index = {c: k for k, c in enumerate(order)}
    sizes = sorted(set(sizes))
    caps = {s: (None if supply is None else supply.get(s)) for s in sizes}

    placements = []
    for size, i, j in enumerate_candidates(cells, sizes):
        mask = 0
        for di in range(size):
            for dj in range(size):
                mask |= 1 << index[(i + di, j + dj)]
        placements.append((size, mask))

    by_cell = [[] for _ in order]
    for pid, (size, mask) in enumerate(placements):
        for k in range(len(order)):
            if mask >> k & 1:
                by_cell[k].append(pid)

    full = (1 << len(order)) - 1
    memo: dict = {}
    unconstrained = all(c is None for c in caps.values())

    def best_from(uncovered, used_counts):
        if uncovered == 0:
            return 0
        key = uncovered if unconstrained else (uncovered, used_counts)
        if key in memo:
            return memo[key]
        cell = (uncovered & -uncovered).bit_length() - 1
        best = None
        for pid in by_cell[cell]:
            size, mask = placements[pid]
            if mask & uncovered != mask:
                continue
            cap = caps[size]
            idx = sizes.index(size)
            if cap is not None and used_counts[idx] >= cap:
                continue
            nxt = tuple(
                n + (1 if k == idx else 0) for k, n in enumerate(used_counts)
            )
            sub = best_from(uncovered & ~mask, nxt)
            if sub is not None and (best is None or sub + 1 < best):
                best = sub + 1
        memo[key] = best
        return best

    import sys
    sys.setrecursionlimit(10000)
    return best_from(full, tuple(0 for _ in sizes))
