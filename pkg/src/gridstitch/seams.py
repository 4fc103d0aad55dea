"""Planar seam matchings and the windowed rematch algorithm.

A matching between the active segments of a seam's two sides is stored as a
pair list in boundary order. Viewed as ordinal pairs (i, j) it forms a
monotone staircase: the first pair is (1, 1), the last is (p, q), and each
consecutive pair advances i, j, or both by one. A repeated i or j is a
gather (that segment carries two matches); three in a row would exceed the
two-match limit, so the same coordinate never repeats twice in a row.

Rematching after an edit recomputes the smallest contiguous run of pairs
around the edit site that admits a valid completion, leaving every segment
outside the run with its exact former match set. Windows are tried smallest
first, lower start first, and the completion is the lexicographically
smallest staircase, which makes every rematch deterministic and biases
redistribution toward lower ordinals.
"""

from __future__ import annotations

from .errors import LengthMismatch, RatioViolation

Pair = tuple[int, int]


def check_ratio(p: int, q: int) -> bool:
    """True iff a planar 1-or-2 matching exists between p and q segments."""
    if p == 0 and q == 0:
        return True
    if p == 0 or q == 0:
        return False
    return p <= 2 * q and q <= 2 * p


def identity_pairs(p: int, q: int) -> list[Pair]:
    if p != q:
        raise LengthMismatch(f"sides have {p} and {q} active segments")
    return [(k, k) for k in range(1, p + 1)]


def verify_pairs(pairs: list[Pair], p: int, q: int) -> bool:
    """Planarity, full coverage, and the 1-2 match rule."""
    if p == 0 and q == 0:
        return pairs == []
    if not pairs:
        return False
    if pairs[0] != (1, 1) or pairs[-1] != (p, q):
        return False
    for k in range(1, len(pairs)):
        di = pairs[k][0] - pairs[k - 1][0]
        dj = pairs[k][1] - pairs[k - 1][1]
        if (di, dj) not in ((1, 0), (0, 1), (1, 1)):
            return False
        if k >= 2:
            pdi = pairs[k - 1][0] - pairs[k - 2][0]
            pdj = pairs[k - 1][1] - pairs[k - 2][1]
            if di == 0 and pdi == 0:
                return False
            if dj == 0 and pdj == 0:
                return False
    return True


def match_counts(pairs: list[Pair], side: str) -> dict[int, int]:
    idx = 0 if side == "a" else 1
    out: dict[int, int] = {}
    for pr in pairs:
        out[pr[idx]] = out.get(pr[idx], 0) + 1
    return out


def _steps_compatible(prev: Pair, nxt: Pair) -> bool:
    """Two consecutive staircase steps may not repeat the same coordinate."""
    if prev == (0, 1) and nxt == (0, 1):
        return False
    if prev == (1, 0) and nxt == (1, 0):
        return False
    return True


def _gap_path(start: Pair, entry_last: Pair, end: Pair, exit_next: Pair,
              p: int, q: int) -> list[Pair] | None:
    """Shortest, then lexicographically smallest, staircase between anchors.

    `start`/`end` are the kept anchor pairs (virtual (0,0) and (p+1, q+1) at
    the seam ends); `entry_last` is the step that produced `start` and
    `exit_next` the step following `end`, so match counts stay legal across
    the junctions. Anchor segments may absorb one extra match. Shortest
    completions are preferred: fewer pairs means fewer gathers. Returns the
    strictly-interior pair list, or None when infeasible.
    """
    i0, j0 = start
    i1, j1 = end
    di_total, dj_total = i1 - i0, j1 - j0
    if di_total < 0 or dj_total < 0 or (di_total == 0 and dj_total == 0):
        return None

    if (di_total, dj_total) in ((0, 1), (1, 0), (1, 1)):
        step = (di_total, dj_total)
        if _steps_compatible(entry_last, step) and _steps_compatible(step, exit_next):
            return []
        if step != (1, 1):
            return None  # a one-unit gap admits no longer path

    min_len = max(max(di_total, dj_total) - 1, 1)
    max_len = di_total + dj_total - 1
    path: list[Pair] = []

    def candidates(i: int, j: int):
        yield (i, j + 1), (0, 1)
        yield (i + 1, j), (1, 0)
        yield (i + 1, j + 1), (1, 1)

    def dfs(i: int, j: int, last: Pair, limit: int, dead: set) -> bool:
        key = (i, j, last, limit)
        if key in dead:
            return False
        for (ni, nj), step in candidates(i, j):
            if not _steps_compatible(last, step):
                continue
            if (ni, nj) == (i1, j1):
                if _steps_compatible(step, exit_next):
                    return True
                continue
            if ni < 1 or nj < 1 or ni > min(i1, p) or nj > min(j1, q):
                continue
            rdi, rdj = i1 - ni, j1 - nj
            remaining = max(rdi, rdj) - 1  # least further interior pairs
            if len(path) + 1 + max(remaining, 0) > limit:
                continue
            if max(rdi, rdj) > 2 * min(rdi, rdj) + 1:
                continue
            path.append((ni, nj))
            if dfs(ni, nj, step, limit, dead):
                return True
            path.pop()
        dead.add(key)
        return False

    for limit in range(min_len, max_len + 1):
        path.clear()
        if dfs(i0, j0, entry_last, limit, set()):
            return list(path)
    return None


def replan(
    old_pairs: list[tuple[int, int]],
    old_a: list[int],
    old_b: list[int],
    new_a: list[int],
    new_b: list[int],
) -> list[tuple[int, int]]:
    """Rebuild a seam matching after segments were removed or inserted.

    Arguments are segment-id pair lists and ordered active-id lists before
    and after the edit. Surviving segments must keep their relative order.
    Returns the new pair list (segment ids) or raises RatioViolation when no
    planar 1-or-2 matching exists.
    """
    p, q = len(new_a), len(new_b)
    pos_a = {sid: k + 1 for k, sid in enumerate(new_a)}
    pos_b = {sid: k + 1 for k, sid in enumerate(new_b)}

    surviving_a = [s for s in old_a if s in pos_a]
    surviving_b = [s for s in old_b if s in pos_b]
    if [pos_a[s] for s in surviving_a] != sorted(pos_a[s] for s in surviving_a):
        raise ValueError("surviving segments were reordered on side a")
    if [pos_b[s] for s in surviving_b] != sorted(pos_b[s] for s in surviving_b):
        raise ValueError("surviving segments were reordered on side b")

    inserted_a = sorted(pos_a[s] for s in new_a if s not in set(old_a))
    inserted_b = sorted(pos_b[s] for s in new_b if s not in set(old_b))

    if p == q:
        # equal active counts admit a direct one-to-one correspondence,
        # which also flattens any gather the edit just compensated
        return list(zip(new_a, new_b))

    m = len(old_pairs)
    mandatory = [
        k for k, (sa, sb) in enumerate(old_pairs)
        if sa not in pos_a or sb not in pos_b
    ]
    lo = min(mandatory) if mandatory else None
    hi = max(mandatory) if mandatory else None

    def attempt(s: int, e: int) -> list[tuple[int, int]] | None:
        # recompute pairs old_pairs[s:e]; keep the rest verbatim
        prefix = old_pairs[:s]
        suffix = old_pairs[e:]
        if prefix:
            la, lb = prefix[-1]
            anchor0 = (pos_a[la], pos_b[lb])
        else:
            anchor0 = (0, 0)
        if suffix:
            fa, fb = suffix[0]
            anchor1 = (pos_a[fa], pos_b[fb])
        else:
            anchor1 = (p + 1, q + 1)
        for t in inserted_a:
            if not (anchor0[0] < t < anchor1[0]):
                return None
        for t in inserted_b:
            if not (anchor0[1] < t < anchor1[1]):
                return None
        if len(prefix) >= 2:
            entry_last = (pos_a[prefix[-1][0]] - pos_a[prefix[-2][0]],
                          pos_b[prefix[-1][1]] - pos_b[prefix[-2][1]])
        else:
            entry_last = (1, 1)
        if len(suffix) >= 2:
            exit_next = (pos_a[suffix[1][0]] - pos_a[suffix[0][0]],
                         pos_b[suffix[1][1]] - pos_b[suffix[0][1]])
        else:
            exit_next = (1, 1)
        gap = _gap_path(anchor0, entry_last, anchor1, exit_next, p, q)
        if gap is None:
            return None
        middle = [(new_a[i - 1], new_b[j - 1]) for i, j in gap]
        return prefix + middle + suffix

    if not check_ratio(p, q):
        raise RatioViolation(f"active lengths {p} and {q} admit no matching")

    for size in range(0, m + 1):
        if mandatory and size < (hi - lo + 1):
            continue
        for s in range(0, m - size + 1):
            e = s + size
            if mandatory and not (s <= lo and hi < e):
                continue
            result = attempt(s, e)
            if result is not None:
                return result
    raise RatioViolation("no planar 1-or-2 matching accommodates the edit")


def init_matching(a_ids: list[int], b_ids: list[int]) -> list[tuple[int, int]]:
    """Identity 1:1 matching for freshly stitched sides of equal length."""
    if len(a_ids) != len(b_ids):
        raise LengthMismatch(
            f"sides have {len(a_ids)} and {len(b_ids)} active segments"
        )
    return list(zip(a_ids, b_ids))
