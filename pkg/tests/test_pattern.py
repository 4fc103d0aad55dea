import pytest

import gridstitch as gs
from gridstitch import document
from gridstitch.errors import (
    AlreadySeamed,
    DuplicateBreak,
    InvalidConfig,
    LengthMismatch,
    NotOnGrid,
    PhaseViolation,
    SelfSeam,
)
from gridstitch.config import PatternConfig


def square(n, x0=0, y0=0):
    return [(x0, y0), (x0 + n, y0), (x0 + n, y0 + n), (x0, y0 + n)]


def two_stitched_squares(n=4):
    """Two n-by-n panels stitched along one side."""
    p = gs.new_pattern()
    a = gs.add_panel(p, square(n))
    b = gs.add_panel(p, square(n, x0=n + 2))
    gs.enter_stitch_phase(p)
    gs.stitch(
        p,
        {"panel": a, "a": [n, 0], "b": [n, n]},
        {"panel": b, "a": [n + 2, 0], "b": [n + 2, n]},
    )
    gs.enter_features_phase(p)
    return p, a, b


def test_new_pattern_defaults():
    p = gs.new_pattern()
    assert p.phase == "draw"
    assert p.revision == 0
    assert p.config.connectors_per_unit == 2


def test_new_pattern_bad_config():
    with pytest.raises(InvalidConfig):
        gs.new_pattern(PatternConfig(seam_allowance=5.0))


def test_add_panel_and_rasterize():
    p = gs.new_pattern()
    a = gs.add_panel(p, square(4))
    gs.enter_stitch_phase(p)
    gs.enter_features_phase(p)
    assert len(p.panels[a].cells) == 16


def test_phase_gating():
    p = gs.new_pattern()
    gs.add_panel(p, square(2))
    gs.enter_stitch_phase(p)
    with pytest.raises(PhaseViolation):
        gs.add_panel(p, square(2, x0=5))
    gs.enter_features_phase(p)
    with pytest.raises(PhaseViolation):
        gs.insert_break_point(p, 1, (1, 0))


def test_break_point_splits_edge():
    p = gs.new_pattern()
    a = gs.add_panel(p, square(4))
    gs.enter_stitch_phase(p)
    gs.insert_break_point(p, a, (1, 0))
    spans = sorted(
        (e.start, e.end) for e in p.edges.values()
        if e.panel_id == a and e.start[1] == 0 and e.end[1] == 0
    )
    assert ((0, 0), (1, 0)) in spans and ((1, 0), (4, 0)) in spans


def test_break_point_errors():
    p = gs.new_pattern()
    a = gs.add_panel(p, square(4))
    gs.enter_stitch_phase(p)
    with pytest.raises(DuplicateBreak):
        gs.insert_break_point(p, a, (0, 0))  # existing corner
    gs.insert_break_point(p, a, (1, 0))
    with pytest.raises(DuplicateBreak):
        gs.insert_break_point(p, a, (1, 0))
    with pytest.raises(NotOnGrid):
        gs.insert_break_point(p, a, (2, 2))  # interior point


def test_stitch_requires_equal_flat_lengths():
    p = gs.new_pattern()
    a = gs.add_panel(p, square(2))
    b = gs.add_panel(p, [(4, 0), (7, 0), (7, 3), (4, 3)])
    gs.enter_stitch_phase(p)
    with pytest.raises(LengthMismatch):
        gs.stitch(
            p,
            {"panel": a, "a": [2, 0], "b": [2, 2]},
            {"panel": b, "a": [4, 0], "b": [4, 3]},
        )


def test_stitch_self_and_already():
    p = gs.new_pattern()
    a = gs.add_panel(p, square(2))
    b = gs.add_panel(p, square(2, x0=4))
    gs.enter_stitch_phase(p)
    ea = {"panel": a, "a": [2, 0], "b": [2, 2]}
    eb = {"panel": b, "a": [4, 0], "b": [4, 2]}
    with pytest.raises(SelfSeam):
        gs.stitch(p, ea, ea)
    gs.stitch(p, ea, eb)
    with pytest.raises(AlreadySeamed):
        gs.stitch(p, ea, {"panel": b, "a": [6, 0], "b": [6, 2]})


def test_enter_features_builds_identity_matching():
    p, a, b = two_stitched_squares(4)
    assert len(p.seams) == 1
    seam = next(iter(p.seams.values()))
    assert len(seam.pairs) == 4
    ids_a = p.seam_side_ids(seam, "a")
    ids_b = p.seam_side_ids(seam, "b")
    assert seam.pairs == list(zip(ids_a, ids_b))
    assert gs.validate_pattern(p) == []


def test_segment_counts():
    p, a, b = two_stitched_squares(4)
    segs_a = [s for s in p.segments.values() if s.panel_id == a]
    assert len(segs_a) == 16  # 4 sides of 4 units


def test_unstitched_panel_all_free():
    p = gs.new_pattern()
    gs.add_panel(p, square(3))
    gs.enter_stitch_phase(p)
    gs.enter_features_phase(p)
    assert all(e.seam_id is None for e in p.edges.values())
    assert all(s.active for s in p.segments.values())


def test_serialization_round_trip():
    p, _, _ = two_stitched_squares(4)
    text = gs.dumps(p)
    q = gs.loads(text)
    assert gs.dumps(q) == text
    assert gs.canonical_view(q) == gs.canonical_view(p)


def test_replay_preserves_grid_state_after_edits():
    p, a, b = two_stitched_squares(4)
    res = gs.convert_to_pleat(p, a, (1, 3), "right")
    assert res.accepted, res.detail
    text = gs.dumps(p)
    q = gs.loads(text)
    assert gs.canonical_view(q) == gs.canonical_view(p)
    assert gs.dumps(q) == text


def test_undo_is_prefix_replay():
    p, a, b = two_stitched_squares(4)
    before = gs.canonical_view(p)
    res = gs.convert_to_pleat(p, a, (1, 3), "right")
    assert res.accepted
    q = gs.undo(p)
    assert gs.canonical_view(q) == before


def test_revision_increments_on_mutations():
    p = gs.new_pattern()
    r0 = p.revision
    gs.add_panel(p, square(2))
    assert p.revision == r0 + 1


def test_fold_accounting_definition():
    p, a, b = two_stitched_squares(4)
    acc = gs.fold_accounting(p, a)
    assert acc["x"] == {"flat_units": 4, "pleats": 0, "folded_units": 4}
    gs.convert_to_pleat(p, a, (1, 3), "right")
    acc = gs.fold_accounting(p, a)
    assert acc["x"] == {"flat_units": 4, "pleats": 1, "folded_units": 3}
