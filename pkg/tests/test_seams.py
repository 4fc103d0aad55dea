"""Matching engine tests, checked against an independent enumerator.

The enumerator builds every planar 1-or-2 matching from scratch by walking
the pair lattice; it shares no code with the windowed replanner.
"""

import pytest

from gridstitch import seams
from gridstitch.errors import LengthMismatch, RatioViolation


def enumerate_matchings(p, q):
    """All valid ordinal pair lists for sides of length p and q."""
    if p == 0 and q == 0:
        return [[]]
    if p == 0 or q == 0:
        return []
    out = []

    def extend(path):
        i, j = path[-1]
        if (i, j) == (p, q):
            out.append(list(path))
            return
        steps = [(1, 1)]
        if len(path) < 2 or path[-2][0] != i:
            steps.append((0, 1))
        if len(path) < 2 or path[-2][1] != j:
            steps.append((1, 0))
        for di, dj in steps:
            ni, nj = i + di, j + dj
            if ni <= p and nj <= q:
                path.append((ni, nj))
                extend(path)
                path.pop()

    extend([(1, 1)])
    return out


def test_enumerator_sanity():
    assert len(enumerate_matchings(1, 1)) == 1
    assert len(enumerate_matchings(2, 1)) == 1  # both a's onto the single b
    assert enumerate_matchings(3, 1) == []      # ratio 3 impossible
    assert len(enumerate_matchings(2, 2)) == 3  # identity, a-gather, b-gather


@pytest.mark.parametrize("p,q", [(p, q) for p in range(0, 7) for q in range(0, 7)])
def test_check_ratio_matches_enumeration(p, q):
    assert seams.check_ratio(p, q) == (len(enumerate_matchings(p, q)) > 0)


def test_identity_matching():
    a = [10, 11, 12, 13]
    b = [20, 21, 22, 23]
    assert seams.init_matching(a, b) == [(10, 20), (11, 21), (12, 22), (13, 23)]
    with pytest.raises(LengthMismatch):
        seams.init_matching(a, b[:3])
    assert seams.init_matching([], []) == []


def test_verify_pairs_accepts_all_enumerated():
    for p in range(1, 6):
        for q in range(1, 6):
            for m in enumerate_matchings(p, q):
                assert seams.verify_pairs(m, p, q)


def test_verify_pairs_rejects_bad():
    assert not seams.verify_pairs([(1, 1), (2, 3)], 2, 3)      # skips b2
    assert not seams.verify_pairs([(1, 1), (1, 2), (1, 3)], 1, 3)  # 3 matches
    assert not seams.verify_pairs([(1, 2), (2, 1)], 2, 2)      # crossing


def _replan_ordinals(old_pairs, old_a, old_b, new_a, new_b):
    pairs = seams.replan(old_pairs, old_a, old_b, new_a, new_b)
    pa = {s: k + 1 for k, s in enumerate(new_a)}
    pb = {s: k + 1 for k, s in enumerate(new_b)}
    return [(pa[x], pb[y]) for x, y in pairs]


def test_deactivate_redistributes_to_lower_ordinal():
    # 4 vs 4 identity, deactivate a2: b2 must rematch to a1 (not a3)
    old_a, old_b = [1, 2, 3, 4], [5, 6, 7, 8]
    old = list(zip(old_a, old_b))
    new = seams.replan(old, old_a, old_b, [1, 3, 4], old_b)
    assert new == [(1, 5), (1, 6), (3, 7), (4, 8)]


def test_deactivate_choice_is_reachable_and_minimal():
    # oracle: among all matchings of 3 vs 4, the chosen one changes the
    # fewest segments relative to the identity
    old_pairs = [(1, 1), (2, 2), (3, 3), (4, 4)]
    chosen = [(1, 1), (1, 2), (2, 3), (3, 4)]  # ordinals after removing a2
    candidates = enumerate_matchings(3, 4)
    assert chosen in candidates

    def displacement(m):
        # segments whose match set changed; old a ordinals 3,4 become 2,3
        old_sets_a = {1: {1}, 2: {3}, 3: {4}}
        old_sets_b = {1: {1}, 2: {2 - 1}, 3: {2}, 4: {3}}
        old_sets_b = {1: {1}, 2: set(), 3: {2}, 4: {3}}
        changed = 0
        new_a, new_b = {}, {}
        for i, j in m:
            new_a.setdefault(i, set()).add(j)
            new_b.setdefault(j, set()).add(i)
        for i in range(1, 4):
            if new_a.get(i, set()) != old_sets_a[i]:
                changed += 1
        for j in range(1, 5):
            if new_b.get(j, set()) != old_sets_b[j]:
                changed += 1
        return changed

    best = min(displacement(m) for m in candidates)
    assert displacement(chosen) == best


def test_insert_creates_adjacent_gather():
    # insert one segment (id 99) at position 3 of side a in a 4:4 seam
    old_a, old_b = [1, 2, 3, 4], [5, 6, 7, 8]
    old = list(zip(old_a, old_b))
    new_a = [1, 2, 99, 3, 4]
    new = seams.replan(old, old_a, old_b, new_a, old_b)
    assert new == [(1, 5), (2, 6), (99, 6), (3, 7), (4, 8)]


def test_paired_insert_keeps_identity():
    # simultaneous aligned insert on both sides stays one-to-one
    old_a, old_b = [1, 2, 3], [4, 5, 6]
    old = list(zip(old_a, old_b))
    new = seams.replan(old, old_a, old_b, [1, 8, 2, 3], [4, 9, 5, 6])
    assert new == [(1, 4), (8, 9), (2, 5), (3, 6)]


def test_insert_when_fully_gathered_is_ratio_violation():
    # side a has 8 segments onto 4: every b already carries two matches
    old_a = list(range(1, 9))
    old_b = list(range(11, 15))
    old = [(1, 11), (2, 11), (3, 12), (4, 12), (5, 13), (6, 13), (7, 14), (8, 14)]
    with pytest.raises(RatioViolation):
        seams.replan(old, old_a, old_b, old_a + [99], old_b)


def test_empty_after_full_consumption():
    old_a, old_b = [1, 2], [3, 4]
    old = [(1, 3), (2, 4)]
    assert seams.replan(old, old_a, old_b, [], []) == []


def test_replan_feasibility_matches_enumeration():
    # random-ish edits over small sides: replan succeeds iff the enumerator
    # finds any matching for the resulting active counts
    import itertools
    import random

    rng = random.Random(7)
    for trial in range(300):
        p = rng.randint(1, 5)
        q = rng.randint(1, 5)
        all_m = enumerate_matchings(p, q)
        if not all_m:
            continue
        old = rng.choice(all_m)
        a_ids = list(range(1, p + 1))
        b_ids = list(range(101, 101 + q))
        old_ids = [(a_ids[i - 1], b_ids[j - 1]) for i, j in old]
        kind = rng.choice(["rm_a", "rm_b", "ins_a", "ins_b"])
        new_a, new_b = list(a_ids), list(b_ids)
        if kind == "rm_a":
            new_a.remove(rng.choice(a_ids))
        elif kind == "rm_b":
            new_b.remove(rng.choice(b_ids))
        elif kind == "ins_a":
            new_a.insert(rng.randint(0, p), 999)
        else:
            new_b.insert(rng.randint(0, q), 999)
        expected = len(enumerate_matchings(len(new_a), len(new_b))) > 0
        try:
            pairs = seams.replan(old_ids, a_ids, b_ids, new_a, new_b)
            ok = True
            pa = {s: k + 1 for k, s in enumerate(new_a)}
            pb = {s: k + 1 for k, s in enumerate(new_b)}
            ords = [(pa[x], pb[y]) for x, y in pairs]
            assert seams.verify_pairs(ords, len(new_a), len(new_b))
        except RatioViolation:
            ok = False
        assert ok == expected, (old, kind, new_a, new_b)


def _pre_suf_preserved(old_ids, new_ids):
    pre = 0
    while pre < min(len(old_ids), len(new_ids)) and old_ids[pre] == new_ids[pre]:
        pre += 1
    suf = 0
    while (suf < min(len(old_ids), len(new_ids)) - pre
           and old_ids[-1 - suf] == new_ids[-1 - suf]):
        suf += 1
    return pre + suf


def test_replan_recomputes_a_minimal_contiguous_window():
    # all changes live in one contiguous recomputed run of pairs around the
    # edit site; the verbatim-preserved prefix plus suffix is maximal over
    # every valid alternative matching
    import random

    rng = random.Random(13)
    for trial in range(200):
        p = rng.randint(2, 6)
        all_m = enumerate_matchings(p, p)
        old = rng.choice(all_m)
        a_ids = list(range(1, p + 1))
        b_ids = list(range(101, 101 + p))
        old_ids = [(a_ids[i - 1], b_ids[j - 1]) for i, j in old]
        victim = rng.choice(a_ids)
        new_a = [x for x in a_ids if x != victim]
        try:
            pairs = seams.replan(old_ids, a_ids, b_ids, new_a, b_ids)
        except RatioViolation:
            continue
        chosen = _pre_suf_preserved(old_ids, pairs)
        best = 0
        for alt in enumerate_matchings(len(new_a), len(b_ids)):
            alt_ids = [(new_a[i - 1], b_ids[j - 1]) for i, j in alt]
            best = max(best, _pre_suf_preserved(old_ids, alt_ids))
        assert chosen == best, (old_ids, victim, pairs)
