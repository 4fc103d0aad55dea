"""Candidate square placements inside a foundation-cell region."""

from __future__ import annotations

Cell = tuple[int, int]


def enumerate_candidates(cells: set[Cell], sizes) -> list[tuple[int, int, int]]:
    """All (size, i, j) squares lying fully inside `cells`.

    Deterministic order: size descending, then lower-left corner lexicographic.
    """
    out = []
    cellset = set(cells)
    for size in sorted(set(sizes), reverse=True):
        if size < 1:
            raise ValueError(f"square size must be >= 1, got {size}")
        for (i, j) in sorted(cellset):
            if all(
                (i + di, j + dj) in cellset
                for di in range(size)
                for dj in range(size)
            ):
                out.append((size, i, j))
    return out


def cover_mask(cells_index: dict[Cell, int], size: int, i: int, j: int) -> int:
    mask = 0
    for di in range(size):
        for dj in range(size):
            mask |= 1 << cells_index[(i + di, j + dj)]
    return mask
