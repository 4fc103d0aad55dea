import gridstitch as gs
from gridstitch import document
from gridstitch.pattern import DART_HOLE, FOUNDATION, PLEAT


def square(n, x0=0, y0=0):
    return [(x0, y0), (x0 + n, y0), (x0 + n, y0 + n), (x0, y0 + n)]


def rect(w, h, x0=0, y0=0):
    return [(x0, y0), (x0 + w, y0), (x0 + w, y0 + h), (x0, y0 + h)]


def stitched_vertical(n=4, top_h=4, bot_h=4):
    """Top panel over bottom panel, stitched bottom-edge-to-top-edge."""
    p = gs.new_pattern()
    top = gs.add_panel(p, rect(n, top_h))
    bot = gs.add_panel(p, rect(n, bot_h, x0=0, y0=-bot_h - 2))
    gs.enter_stitch_phase(p)
    gs.stitch(
        p,
        {"panel": top, "a": [0, 0], "b": [n, 0]},
        {"panel": bot, "a": [0, -2], "b": [n, -2]},
    )
    gs.enter_features_phase(p)
    return p, top, bot


def grid_view(p):
    v = gs.canonical_view(p)
    return {k: v[k] for k in ("panels", "edges", "seams")}


def seam_of(p):
    return next(iter(p.seams.values()))


def match_counts(p, seam, side):
    return [len(p.segment_matches(sid)) for sid in p.seam_side_ids(seam, side)]


# -- strip insertion -----------------------------------------------------------


def test_insert_strip_free_region_grows_without_matching_change():
    p = gs.new_pattern()
    a = gs.add_panel(p, square(3))
    gs.enter_stitch_phase(p)
    gs.enter_features_phase(p)
    res = gs.insert_strip(p, a, (1, 1), "col", "right")
    assert res.accepted, res.detail
    assert len(p.panels[a].cells) == 12
    assert res.matching_diffs == {}


def test_insert_strip_introduces_gather_on_seam():
    # the bottom seam gains one gathered pair next to the insertion
    p, top, bot = stitched_vertical(4)
    res = gs.insert_strip(p, top, (1, 1), "col", "right")
    assert res.accepted, res.detail
    seam = seam_of(p)
    assert len(p.panels[top].cells) == 20
    a_counts = match_counts(p, seam, "a")
    b_counts = match_counts(p, seam, "b")
    assert a_counts == [1, 1, 1, 1, 1]
    assert sorted(b_counts) == [1, 1, 1, 2]
    assert len(seam.pairs) == 5
    assert gs.validate_pattern(p) == []


def test_insert_strip_ratio_violation_is_atomic():
    p, top, bot = stitched_vertical(4)
    gs.gather_edge(p, {"panel": top, "a": [0, 0], "b": [4, 0]})
    before = gs.dumps(p)
    res = gs.insert_strip(p, top, (1, 1), "col", "right")
    assert not res.accepted
    assert res.reason == "RatioViolation"
    assert gs.dumps(p) == before


def test_insert_then_delete_is_identity():
    p, top, bot = stitched_vertical(4)
    before = grid_view(p)
    res = gs.insert_strip(p, top, (1, 1), "col", "right")
    assert res.accepted
    res = gs.delete_strip(p, top, (2, 1), "col")
    assert res.accepted, res.detail
    assert grid_view(p) == before


def test_delete_strip_with_feature_rejected():
    p, top, bot = stitched_vertical(4)
    assert gs.convert_to_pleat(p, top, (1, 3), "right").accepted
    res = gs.delete_strip(p, top, (1, 0), "col")
    assert not res.accepted
    assert res.reason == "FeatureInWay"


def test_delete_strip_ratio_violation():
    # shrinking the long side of a fully gathered seam below 2:1 works,
    # but shrinking the short side of one is infeasible
    p, top, bot = stitched_vertical(4)
    assert gs.gather_edge(p, {"panel": top, "a": [0, 0], "b": [4, 0]}).accepted
    before = gs.dumps(p)
    res = gs.delete_strip(p, bot, (1, -4), "col")
    assert not res.accepted
    assert res.reason == "RatioViolation"
    assert gs.dumps(p) == before


def test_insert_strip_row_axis():
    p, top, bot = stitched_vertical(4)
    res = gs.insert_strip(p, top, (1, 1), "row", "up")
    assert res.accepted, res.detail
    assert len(p.panels[top].cells) == 20
    # vertical side edges grew; the bottom seam is untouched
    assert res.matching_diffs == {}


# -- gathers ---------------------------------------------------------------------


def test_gather_case1_opposite_free_doubles_both():
    p, top, bot = stitched_vertical(2, top_h=3)
    seam = seam_of(p)
    res = gs.gather_edge(p, {"panel": top, "a": [0, 0], "b": [2, 0]})
    assert res.accepted, res.detail
    # e doubled: top panel now 4 wide; top free edge doubled too
    assert len(p.panels[top].cells) == 12
    assert match_counts(p, seam, "a") == [1, 1, 1, 1]
    assert match_counts(p, seam, "b") == [2, 2]
    assert gs.validate_pattern(p) == []


def test_gather_case2_already_gathered_rejected():
    p, top, bot = stitched_vertical(4)
    assert gs.gather_edge(p, {"panel": top, "a": [0, 0], "b": [4, 0]}).accepted
    before = gs.dumps(p)
    res = gs.gather_edge(p, {"panel": top, "a": [0, 0], "b": [8, 0]})
    assert not res.accepted
    assert res.reason == "AlreadyGathered"
    assert gs.dumps(p) == before


def test_gather_not_in_seam_rejected():
    p, top, bot = stitched_vertical(4)
    res = gs.gather_edge(p, {"panel": top, "a": [0, 4], "b": [4, 4]})
    assert not res.accepted
    assert res.reason == "NotInSeam"


def test_gather_case3_flat_seam_propagates():
    # three stacked panels: gathering the middle panel's bottom edge also
    # doubles its top edge, gathering the upper seam
    p = gs.new_pattern()
    top = gs.add_panel(p, rect(4, 2, y0=8))
    mid = gs.add_panel(p, rect(4, 2, y0=3))
    bot = gs.add_panel(p, rect(4, 2, y0=-2))
    gs.enter_stitch_phase(p)
    s_upper = gs.stitch(
        p,
        {"panel": top, "a": [0, 8], "b": [4, 8]},
        {"panel": mid, "a": [0, 5], "b": [4, 5]},
    )
    s_lower = gs.stitch(
        p,
        {"panel": mid, "a": [0, 3], "b": [4, 3]},
        {"panel": bot, "a": [0, 0], "b": [4, 0]},
    )
    gs.enter_features_phase(p)
    res = gs.gather_edge(p, {"panel": mid, "a": [0, 3], "b": [4, 3]})
    assert res.accepted, res.detail
    assert len(p.panels[mid].cells) == 16
    lower = p.seams[s_lower]
    upper = p.seams[s_upper]
    assert sorted(match_counts(p, lower, "b")) == [2, 2, 2, 2]
    assert sorted(match_counts(p, upper, "a")) == [2, 2, 2, 2]
    assert gs.validate_pattern(p) == []


def test_gather_case3b_partial_span():
    # the gathered edge spans only half of the opposite seam: only the
    # directly opposing segments gather
    p = gs.new_pattern()
    top = gs.add_panel(p, rect(4, 2, y0=3))
    bot = gs.add_panel(p, rect(4, 3, y0=-4))
    gs.enter_stitch_phase(p)
    gs.insert_break_point(p, top, (2, 3))
    gs.insert_break_point(p, bot, (2, -1))
    s_left = gs.stitch(
        p,
        {"panel": top, "a": [0, 3], "b": [2, 3]},
        {"panel": bot, "a": [0, -1], "b": [2, -1]},
    )
    s_right = gs.stitch(
        p,
        {"panel": top, "a": [2, 3], "b": [4, 3]},
        {"panel": bot, "a": [2, -1], "b": [4, -1]},
    )
    gs.enter_features_phase(p)
    res = gs.gather_edge(p, {"panel": bot, "a": [0, -1], "b": [2, -1]})
    assert res.accepted, res.detail
    left = p.seams[s_left]
    right = p.seams[s_right]
    # left seam gathered, right untouched
    assert sorted(match_counts(p, left, "a")) == [2, 2]
    assert match_counts(p, right, "a") == [1, 1]
    assert match_counts(p, right, "b") == [1, 1]
    assert gs.validate_pattern(p) == []


# -- ordering -------------------------------------------------------------------


def test_feature_order_gate():
    p, top, bot = stitched_vertical(4)
    assert gs.convert_to_pleat(p, top, (0, 3), "right").accepted
    res = gs.gather_edge(p, {"panel": top, "a": [0, 0], "b": [4, 0]})
    assert not res.accepted
    assert res.reason == "OrderViolation"
    assert gs.add_dart(p, top, (2, 2), "v", 8.0, 1).accepted
    res = gs.convert_to_pleat(p, top, (2, 3), "right")
    assert not res.accepted
    assert res.reason == "OrderViolation"


def test_edit_result_diff_applies_to_view():
    p, top, bot = stitched_vertical(4)
    old = gs.canonical_view(p)
    res = gs.insert_strip(p, top, (1, 1), "col", "right")
    assert res.accepted
    new = gs.canonical_view(p)
    patched = dict(old)
    for key in ("revision", "phase", "stage", "features"):
        patched[key] = res.view_patch[key]
    for section in ("panels", "edges", "seams"):
        merged = dict(old[section])
        merged.update(res.view_patch[section])
        for gone in res.view_patch[f"{section}_removed"]:
            merged.pop(gone, None)
        patched[section] = merged
    assert patched == new


def test_pleat_triples_form_knife_box_and_inverted_box():
    # three arrangements of adjacent pleats: all-right folds make a knife
    # run, right-left makes a box, left-right makes an inverted box
    arrangements = {
        "knife": ["right", "right", "right"],
        "box": ["right", "left"],
        "inverted box": ["left", "right"],
    }
    for name, dirs in arrangements.items():
        p = gs.new_pattern()
        pid = gs.add_panel(p, rect(8, 3))
        gs.enter_stitch_phase(p)
        gs.enter_features_phase(p)
        at = 1
        for d in dirs:
            res = gs.insert_pleat(p, pid, (at, 1), d)
            assert res.accepted, (name, d, res.detail)
            at += 2
        got = [
            (c, data.pleat_dir)
            for c, data in sorted(p.panels[pid].cells.items())
            if data.kind == PLEAT
        ]
        assert [d for _, d in got] == dirs, name
        assert len(p.panels[pid].cells) == 24 + 3 * len(dirs)
        from gridstitch.layout import assembly_instructions
        from gridstitch.cover import solve_cover

        instr = assembly_instructions(p, solve_cover(p))
        directives = [f["directive"] for f in instr["pleats"]]
        assert len(directives) == len(dirs)
        for d, directive in zip(dirs, directives):
            expected = "left pins to right sockets" if d == "right" else \
                "right pins to left sockets"
            assert expected in directive, name
