# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled exact-cover kernel; mirrors kernel_py.solve_min_cover exactly.

Same branch order, bounds, memoization, and node accounting, so the two
kernels return identical results; this one just walks the tree in C.
"""

import time

from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

OPTIMAL, INFEASIBLE, TIMEOUT = 0, 1, 2

DEF MEMO_LIMIT = 2097152


cdef class Ctx:
    cdef int n_cells
    cdef int n_cands
    cdef int n_sizes
    cdef int words
    cdef int max_piece
    cdef unsigned long long *covers      # n_cands * words
    cdef int *sizes                      # n_cands
    cdef long *caps                      # n_sizes
    cdef long *counts                    # n_sizes
    cdef int *cell_cands                 # flattened
    cdef int *cell_off                   # n_cells + 1
    cdef unsigned long long *work        # (n_cells + 2) * words
    cdef int *sel
    cdef int *best_sel
    cdef int best
    cdef int sel_len
    cdef int best_len
    cdef long long nodes
    cdef bint timed_out
    cdef bint use_memo
    cdef double deadline
    cdef bint has_deadline
    cdef dict memo


cdef inline int first_cell(unsigned long long *mask, int words) nogil:
    cdef int w
    for w in range(words):
        if mask[w]:
            return w * 64 + __builtin_ctzll(mask[w])
    return -1


cdef inline int popcount_words(unsigned long long *mask, int words) nogil:
    cdef int w, total = 0
    for w in range(words):
        total += __builtin_popcountll(mask[w])
    return total


cdef inline bint subset_of(unsigned long long *cover, unsigned long long *mask,
                           int words) nogil:
    cdef int w
    for w in range(words):
        if cover[w] & ~mask[w]:
            return False
    return True


cdef void dfs(Ctx ctx, unsigned long long *uncovered, int used, int depth):
    cdef int cell, k, cand, si, w, rest_cells, lb
    cdef long cap
    cdef unsigned long long *cover
    cdef unsigned long long *rest
    cdef bint empty
    cdef object key, prev

    if ctx.timed_out:
        return
    ctx.nodes += 1
    if ctx.has_deadline and ctx.nodes % 2048 == 0:
        if time.monotonic() > ctx.deadline:
            ctx.timed_out = True
            return
    if ctx.use_memo:
        key = (<char *>uncovered)[:ctx.words * 8]
        prev = ctx.memo.get(key)
        if prev is not None and <int>prev <= used:
            return
        if len(ctx.memo) < MEMO_LIMIT:
            ctx.memo[key] = used

    cell = first_cell(uncovered, ctx.words)
    rest = ctx.work + (depth + 1) * ctx.words
    for k in range(ctx.cell_off[cell], ctx.cell_off[cell + 1]):
        cand = ctx.cell_cands[k]
        cover = ctx.covers + cand * ctx.words
        if not subset_of(cover, uncovered, ctx.words):
            continue
        si = ctx.sizes[cand]
        cap = ctx.caps[si]
        if 0 <= cap <= ctx.counts[si]:
            continue
        empty = True
        for w in range(ctx.words):
            rest[w] = uncovered[w] & ~cover[w]
            if rest[w]:
                empty = False
        if empty:
            if used + 1 < ctx.best:
                ctx.best = used + 1
                memcpy(ctx.best_sel, ctx.sel, ctx.sel_len * sizeof(int))
                ctx.best_sel[ctx.sel_len] = cand
                ctx.best_len = ctx.sel_len + 1
            continue
        rest_cells = popcount_words(rest, ctx.words)
        lb = (rest_cells + ctx.max_piece - 1) // ctx.max_piece
        if used + 1 + lb >= ctx.best:
            continue
        ctx.counts[si] += 1
        ctx.sel[ctx.sel_len] = cand
        ctx.sel_len += 1
        dfs(ctx, rest, used + 1, depth + 1)
        ctx.sel_len -= 1
        ctx.counts[si] -= 1
        if ctx.timed_out:
            return


def solve_min_cover(n_cells, cand_covers, cand_sizes, size_caps, cell_cands,
                    max_piece_cells, deadline=None):
    """Returns (status, best_count, best_selection, nodes, lower_bound)."""
    if n_cells == 0:
        return OPTIMAL, 0, [], 0, 0
    cdef int words = (n_cells + 63) // 64
    cdef int n_cands = len(cand_covers)
    cdef int n_sizes = len(size_caps)
    cdef Ctx ctx = Ctx()
    cdef int i, w, total_cc
    cdef object mask_int

    ctx.n_cells = n_cells
    ctx.n_cands = n_cands
    ctx.n_sizes = n_sizes
    ctx.words = words
    ctx.max_piece = max_piece_cells
    ctx.nodes = 0
    ctx.timed_out = False
    ctx.best = n_cells + 1
    ctx.best_len = -1
    ctx.sel_len = 0
    ctx.memo = {}
    ctx.use_memo = all(c < 0 for c in size_caps)
    ctx.has_deadline = deadline is not None
    ctx.deadline = deadline if deadline is not None else 0.0

    ctx.covers = <unsigned long long *>malloc(max(n_cands, 1) * words * 8)
    ctx.sizes = <int *>malloc(max(n_cands, 1) * sizeof(int))
    ctx.caps = <long *>malloc(max(n_sizes, 1) * sizeof(long))
    ctx.counts = <long *>malloc(max(n_sizes, 1) * sizeof(long))
    total_cc = sum(len(cc) for cc in cell_cands)
    ctx.cell_cands = <int *>malloc(max(total_cc, 1) * sizeof(int))
    ctx.cell_off = <int *>malloc((n_cells + 1) * sizeof(int))
    ctx.work = <unsigned long long *>malloc((n_cells + 2) * words * 8)
    ctx.sel = <int *>malloc(max(n_cells, 1) * sizeof(int))
    ctx.best_sel = <int *>malloc(max(n_cells, 1) * sizeof(int))

    try:
        for i in range(n_cands):
            mask_int = cand_covers[i]
            for w in range(words):
                ctx.covers[i * words + w] = (mask_int >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
            ctx.sizes[i] = cand_sizes[i]
        for i in range(n_sizes):
            ctx.caps[i] = size_caps[i]
            ctx.counts[i] = 0
        ctx.cell_off[0] = 0
        k = 0
        for i in range(n_cells):
            for cand in cell_cands[i]:
                ctx.cell_cands[k] = cand
                k += 1
            ctx.cell_off[i + 1] = k

        root_lb = (n_cells + max_piece_cells - 1) // max_piece_cells

        greedy_sel = _greedy(n_cells, cand_covers, cand_sizes, size_caps, cell_cands)
        if greedy_sel is not None:
            ctx.best = len(greedy_sel)
            ctx.best_len = len(greedy_sel)
            for i in range(len(greedy_sel)):
                ctx.best_sel[i] = greedy_sel[i]

        full = ctx.work
        for w in range(words):
            full[w] = 0
        for i in range(n_cells):
            full[i // 64] |= (<unsigned long long>1) << (i % 64)

        if ctx.best > root_lb:
            dfs(ctx, full, 0, 0)

        nodes = ctx.nodes
        if ctx.timed_out:
            sel = ([ctx.best_sel[i] for i in range(ctx.best_len)]
                   if ctx.best_len >= 0 else None)
            count = ctx.best if sel is not None else -1
            return TIMEOUT, count, sel, nodes, root_lb
        if ctx.best_len < 0:
            return INFEASIBLE, -1, None, nodes, root_lb
        sel = [ctx.best_sel[i] for i in range(ctx.best_len)]
        return OPTIMAL, ctx.best, sel, nodes, ctx.best
    finally:
        free(ctx.covers)
        free(ctx.sizes)
        free(ctx.caps)
        free(ctx.counts)
        free(ctx.cell_cands)
        free(ctx.cell_off)
        free(ctx.work)
        free(ctx.sel)
        free(ctx.best_sel)


def _greedy(n_cells, cand_covers, cand_sizes, size_caps, cell_cands):
    counts = [0] * len(size_caps)
    uncovered = (1 << n_cells) - 1
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
