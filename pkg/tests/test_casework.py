"""Golden suite for the full feature casework.

Seventeen scenarios covering every gather, pleat, and dart placement case,
each asserting the exact accept/reject outcome and the resulting matching.
"""

import gridstitch as gs
from gridstitch.pattern import DART_HOLE, PLEAT


def rect(w, h, x0=0, y0=0):
    return [(x0, y0), (x0 + w, y0), (x0 + w, y0 + h), (x0, y0 + h)]


def stacked(w=4, top_h=4, bot_h=4):
    """Top panel stitched to a bottom panel along a horizontal seam."""
    p = gs.new_pattern()
    top = gs.add_panel(p, rect(w, top_h))
    bot = gs.add_panel(p, rect(w, bot_h, y0=-bot_h - 2))
    gs.enter_stitch_phase(p)
    sid = gs.stitch(
        p,
        {"panel": top, "a": [0, 0], "b": [w, 0]},
        {"panel": bot, "a": [0, -2], "b": [w, -2]},
    )
    gs.enter_features_phase(p)
    return p, top, bot, sid


def side_by_side(h=6, w=6):
    """Left and right panels stitched along a vertical seam."""
    p = gs.new_pattern()
    left = gs.add_panel(p, rect(w, h))
    right = gs.add_panel(p, rect(w, h, x0=w + 2))
    gs.enter_stitch_phase(p)
    sid = gs.stitch(
        p,
        {"panel": left, "a": [w, 0], "b": [w, h]},
        {"panel": right, "a": [w + 2, 0], "b": [w + 2, h]},
    )
    gs.enter_features_phase(p)
    return p, left, right, sid


def counts(p, seam_id, side):
    seam = p.seams[seam_id]
    return [len(p.segment_matches(s)) for s in p.seam_side_ids(seam, side)]


# -- gathers (cases 1, 2, 3A, 3B) -------------------------------------------


def test_gather_case_1_opposite_edge_free():
    p, top, bot, sid = stacked(w=2, top_h=3)
    res = gs.gather_edge(p, {"panel": top, "a": [0, 0], "b": [2, 0]})
    assert res.accepted, res.detail
    # e and f both doubled in length
    assert len(p.panels[top].cells) == 12
    top_edge = p.find_edge(top, (0, 3), (4, 3))
    assert top_edge.flat_units == 4 and top_edge.seam_id is None
    # e's seam is fully gathered 2:1
    assert counts(p, sid, "a") == [1, 1, 1, 1]
    assert counts(p, sid, "b") == [2, 2]


def test_gather_case_2_opposite_edge_gathered_prohibited():
    # middle panel: bottom edge e seamed, top edge f already gathered
    p = gs.new_pattern()
    upper = gs.add_panel(p, rect(4, 2, y0=8))
    mid = gs.add_panel(p, rect(4, 3, y0=3))
    lower = gs.add_panel(p, rect(4, 2, y0=-2))
    gs.enter_stitch_phase(p)
    gs.stitch(p, {"panel": mid, "a": [0, 6], "b": [4, 6]},
              {"panel": upper, "a": [0, 8], "b": [4, 8]})
    gs.stitch(p, {"panel": mid, "a": [0, 3], "b": [4, 3]},
              {"panel": lower, "a": [0, 0], "b": [4, 0]})
    gs.enter_features_phase(p)
    # gather f (mid's top edge): mid doubles to 8 wide, both seams adjust
    assert gs.gather_edge(p, {"panel": mid, "a": [0, 6], "b": [4, 6]}).accepted
    before = gs.dumps(p)
    # now gathering e would double f again and exceed its 2:1 bound
    res = gs.gather_edge(p, {"panel": mid, "a": [0, 3], "b": [8, 3]})
    assert not res.accepted
    assert res.reason == "AlreadyGathered"
    assert gs.dumps(p) == before


def test_gather_case_3a_opposite_edge_in_flat_seam():
    p = gs.new_pattern()
    upper = gs.add_panel(p, rect(4, 2, y0=8))
    mid = gs.add_panel(p, rect(4, 3, y0=3))
    lower = gs.add_panel(p, rect(4, 2, y0=-2))
    gs.enter_stitch_phase(p)
    s_top = gs.stitch(p, {"panel": mid, "a": [0, 6], "b": [4, 6]},
                      {"panel": upper, "a": [0, 8], "b": [4, 8]})
    s_bot = gs.stitch(p, {"panel": mid, "a": [0, 3], "b": [4, 3]},
                      {"panel": lower, "a": [0, 0], "b": [4, 0]})
    gs.enter_features_phase(p)
    res = gs.gather_edge(p, {"panel": mid, "a": [0, 3], "b": [4, 3]})
    assert res.accepted, res.detail
    # e's own seam gathered, and f's flat seam gathered where it opposes e
    assert counts(p, s_bot, "b") == [2, 2, 2, 2]
    assert counts(p, s_top, "b") == [2, 2, 2, 2]


def test_gather_case_3b_only_directly_opposing_segments():
    p = gs.new_pattern()
    top = gs.add_panel(p, rect(4, 2, y0=3))
    bot = gs.add_panel(p, rect(4, 3, y0=-4))
    gs.enter_stitch_phase(p)
    gs.insert_break_point(p, top, (2, 3))
    gs.insert_break_point(p, bot, (2, -1))
    s_left = gs.stitch(p, {"panel": top, "a": [0, 3], "b": [2, 3]},
                       {"panel": bot, "a": [0, -1], "b": [2, -1]})
    s_right = gs.stitch(p, {"panel": top, "a": [2, 3], "b": [4, 3]},
                        {"panel": bot, "a": [2, -1], "b": [4, -1]})
    gs.enter_features_phase(p)
    res = gs.gather_edge(p, {"panel": bot, "a": [0, -1], "b": [2, -1]})
    assert res.accepted, res.detail
    assert sorted(counts(p, s_left, "a")) == [2, 2]
    assert counts(p, s_right, "a") == [1, 1]
    assert counts(p, s_right, "b") == [1, 1]


# -- pleat conversion (cases 1, 2, resolutions b and c) -----------------------


def test_pleat_convert_case_1_no_seam_adjustment():
    p, top, bot, sid = stacked()
    before_pairs = list(p.seams[sid].pairs)
    # interior cell: its folded faces are interior, nothing rematches
    res = gs.convert_to_pleat(p, top, (1, 1), "right")
    assert res.accepted, res.detail
    assert res.matching_diffs == {}
    assert p.seams[sid].pairs == before_pairs
    # flush to the vertical free edge folding parallel: still no seam change
    res = gs.convert_to_pleat(p, top, (0, 2), "right")
    assert res.accepted, res.detail
    assert res.matching_diffs == {}


def test_pleat_convert_case_2_flush_orthogonal_fold_rematches():
    p, top, bot, sid = stacked()
    res = gs.convert_to_pleat(p, top, (1, 0), "right")
    assert res.accepted, res.detail
    assert str(sid) in res.matching_diffs
    # top side lost a unit: one of its segments now carries two matches
    assert sorted(counts(p, sid, "a")) == [1, 1, 2]
    assert counts(p, sid, "b") == [1, 1, 1, 1]
    assert p.panels[top].cells[(1, 0)].kind == PLEAT


def test_pleat_convert_resolution_b_delete_gathered_segment():
    p, top, bot, sid = stacked()
    assert gs.convert_to_pleat(p, top, (1, 0), "right").accepted
    res = gs.resolve_by_delete(p, top, (1, 0), "right")
    assert res.accepted, res.detail
    # opposite panel lost a strip; the seam is flat 3:3 again
    assert len(p.panels[bot].cells) == 12
    assert counts(p, sid, "a") == [1, 1, 1]
    assert counts(p, sid, "b") == [1, 1, 1]


def test_pleat_convert_resolution_c_expand_current_edge():
    p, top, bot, sid = stacked()
    assert gs.convert_to_pleat(p, top, (1, 0), "right").accepted
    res = gs.resolve_by_expand(p, top, (1, 0), "right")
    assert res.accepted, res.detail
    # panel widened instead: folded seam length restored, flat 4:4
    assert len(p.panels[top].cells) == 20
    assert counts(p, sid, "a") == [1, 1, 1, 1]
    assert counts(p, sid, "b") == [1, 1, 1, 1]


# -- pleat insertion (cases 1 and 2) ------------------------------------------


def test_pleat_insert_case_1_flush_perpendicular_no_rematch():
    p, top, bot, sid = stacked()
    res = gs.insert_pleat(p, top, (1, 0), "right")
    assert res.accepted, res.detail
    # the new edge length folds away immediately: no rematching needed
    assert res.matching_diffs == {}
    assert p.panels[top].cells[(2, 0)].kind == PLEAT
    assert len(p.panels[top].cells) == 20


def test_pleat_insert_case_2_mid_panel_gathers_endpoint_seam():
    p, top, bot, sid = stacked()
    res = gs.insert_pleat(p, top, (1, 1), "right")
    assert res.accepted, res.detail
    assert str(sid) in res.matching_diffs
    assert sorted(counts(p, sid, "b")) == [1, 1, 1, 2]
    assert p.panels[top].cells[(2, 1)].kind == PLEAT


# -- diamond darts (cases A-D) --------------------------------------------------


def test_dart_a_interior_diamond():
    p, left, right, sid = side_by_side()
    res = gs.add_dart(p, left, (2, 3), "v", 8.0, 1)
    assert res.accepted, res.detail
    holes = [c for c, d in p.panels[left].cells.items() if d.kind == DART_HOLE]
    assert sorted(holes) == [(1, 2), (1, 3), (2, 2), (2, 3)]
    assert p.features[-1].params["variant"] == "diamond"
    assert p.features[-1].params["modules"] == 2


def test_dart_b_on_seam_spans_both_panels():
    p, left, right, sid = side_by_side()
    res = gs.add_dart(p, left, (6, 3), "v", 8.0, 1)
    assert res.accepted, res.detail
    assert p.features[-1].params["variant"] == "diamond_seam"
    left_holes = [c for c, d in p.panels[left].cells.items() if d.kind == DART_HOLE]
    right_holes = [c for c, d in p.panels[right].cells.items() if d.kind == DART_HOLE]
    assert sorted(left_holes) == [(5, 2), (5, 3)]
    assert len(right_holes) == 2
    # the seam segments inside the hole are consumed
    assert counts(p, sid, "a") == [1, 1, 1, 1]
    assert counts(p, sid, "b") == [1, 1, 1, 1]


def test_dart_c_beyond_boundary_rejected():
    p, left, right, sid = side_by_side()
    before = gs.dumps(p)
    res = gs.add_dart(p, left, (2, 1), "v", 8.0, 2)
    assert not res.accepted
    assert res.reason == "InsufficientSpace"
    assert gs.dumps(p) == before


def test_dart_d_overlap_rejected():
    p, left, right, sid = side_by_side()
    assert gs.add_dart(p, left, (6, 3), "v", 8.0, 1).accepted
    res = gs.add_dart(p, left, (6, 2), "v", 8.0, 1)
    assert not res.accepted
    assert res.reason == "DartOverlap"


# -- edge darts (cases E, F, G) --------------------------------------------------


def test_dart_e_perpendicular_to_free_edge():
    p, left, right, sid = side_by_side()
    res = gs.add_dart(p, left, (2, 6), "v", 4.0, 2)  # non-universal ok on free
    assert res.accepted, res.detail
    holes = [c for c, d in p.panels[left].cells.items() if d.kind == DART_HOLE]
    assert sorted(holes) == [(1, 4), (1, 5), (2, 4), (2, 5)]
    assert p.features[-1].params["variant"] == "triangle"
    assert p.features[-1].params["modules"] == 1


def test_dart_f_universal_on_ungathered_seam():
    p, top, bot, sid = stacked()
    res = gs.add_dart(p, top, (2, 0), "v", 8.0, 2)
    assert res.accepted, res.detail
    assert p.features[-1].params["variant"] == "triangle_seam"
    # folded edge is 2*unit - w = 1 unit: the side lost one active segment
    assert sorted(counts(p, sid, "a")) == [1, 1, 2]
    assert counts(p, sid, "b") == [1, 1, 1, 1]

    # non-universal width on a seam is a mismatch
    p2, top2, bot2, sid2 = stacked()
    res = gs.add_dart(p2, top2, (2, 0), "v", 4.0, 2)
    assert not res.accepted
    assert res.reason == "NonUniversalOnSeam"

    # a gathered seam cannot take the dart
    p3, top3, bot3, sid3 = stacked()
    assert gs.gather_edge(p3, {"panel": top3, "a": [0, 0], "b": [4, 0]}).accepted
    res = gs.add_dart(p3, top3, (2, 0), "v", 8.0, 2)
    assert not res.accepted
    assert res.reason == "GatheredSeam"


def test_dart_g_corner_joining_across_seam():
    p, left, right, sid = side_by_side()
    res = gs.add_dart(p, left, (6, 6), "v", 8.0, 2)
    assert res.accepted, res.detail
    assert p.features[-1].params["variant"] == "corner"
    assert p.features[-1].params["modules"] == 1
    left_holes = [c for c, d in p.panels[left].cells.items() if d.kind == DART_HOLE]
    assert sorted(left_holes) == [(5, 4), (5, 5)]
    # top two seam segment pairs consumed
    assert counts(p, sid, "a") == [1, 1, 1, 1]
    assert counts(p, sid, "b") == [1, 1, 1, 1]
    assert gs.validate_pattern(p) == []
