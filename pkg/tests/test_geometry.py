import pytest

from gridstitch import geometry
from gridstitch.errors import (
    DisconnectionHazard,
    NotClosed,
    OffGrid,
    SelfIntersecting,
)


def square(n, x0=0, y0=0):
    return [(x0, y0), (x0 + n, y0), (x0 + n, y0 + n), (x0, y0 + n)]


def test_validate_square():
    out = geometry.validate_outline(square(4))
    assert out[0] == (0, 0)
    assert len(out) == 4


def test_validate_merges_collinear_and_normalizes_direction():
    cw = [(0, 0), (0, 4), (2, 4), (4, 4), (4, 0)]
    out = geometry.validate_outline(cw)
    assert out == ((0, 0), (4, 0), (4, 4), (0, 4))


def test_diagonal_rejected():
    with pytest.raises(OffGrid):
        geometry.validate_outline([(0, 0), (4, 0), (4, 4), (1, 3)])


def test_fractional_vertex_rejected():
    with pytest.raises(OffGrid):
        geometry.validate_outline([(0, 0), (3.5, 0), (3.5, 2), (0, 2)])


def test_self_intersection_rejected():
    bowtie = [(0, 0), (4, 0), (4, 2), (2, 2), (2, -1), (0, -1)]
    with pytest.raises(SelfIntersecting):
        geometry.validate_outline(bowtie)


def test_too_few_vertices():
    with pytest.raises(NotClosed):
        geometry.validate_outline([(0, 0), (4, 0)])


def test_rasterize_square_and_lshape():
    cells = geometry.rasterize(geometry.validate_outline(square(4)))
    assert len(cells) == 16
    lshape = [(0, 0), (3, 0), (3, 2), (2, 2), (2, 3), (0, 3)]
    cells = geometry.rasterize(geometry.validate_outline(lshape))
    assert len(cells) == 8


def test_rasterize_trace_round_trip():
    shapes = [
        square(4),
        [(0, 0), (3, 0), (3, 2), (2, 2), (2, 3), (0, 3)],
        [(0, 0), (5, 0), (5, 1), (4, 1), (4, 2), (5, 2), (5, 3), (0, 3)],
        [(-2, -1), (1, -1), (1, 2), (0, 2), (0, 1), (-2, 1)],
    ]
    for shape in shapes:
        outline = geometry.validate_outline(shape)
        cells = geometry.rasterize(outline)
        assert geometry.trace_outline(cells) == outline


def test_strip_cells_column():
    cells = geometry.rasterize(geometry.validate_outline(square(3)))
    strip = geometry.strip_cells(cells, (1, 1), "col")
    assert strip == [(1, 0), (1, 1), (1, 2)]
    strip = geometry.strip_cells(cells, (1, 1), "row")
    assert strip == [(0, 1), (1, 1), (2, 1)]


def test_strip_maximality_stops_at_gap():
    cells = {(0, j) for j in range(5)} - {(0, 2)}
    run = geometry.strip_cells(cells, (0, 1), "col")
    assert run == [(0, 0), (0, 1)]


def test_plan_insert_simple():
    cells = geometry.rasterize(geometry.validate_outline(square(3)))
    strip = geometry.strip_cells(cells, (1, 0), "col")
    plan = geometry.plan_insert(cells, strip, "right")
    assert set(plan.dup) == {(2, 0), (2, 1), (2, 2)}
    assert plan.moved == {(2, j): (3, j) for j in range(3)}


def test_plan_insert_at_boundary_no_move():
    cells = geometry.rasterize(geometry.validate_outline(square(3)))
    strip = geometry.strip_cells(cells, (2, 0), "col")
    plan = geometry.plan_insert(cells, strip, "right")
    assert plan.moved == {}
    assert set(plan.dup) == {(3, 0), (3, 1), (3, 2)}


def test_plan_insert_rejects_fusion():
    # U shape: inserting up from the left arm would fuse with the right arm
    cells = {(0, 0), (1, 0), (2, 0), (0, 1), (2, 1), (0, 2), (2, 2)}
    strip = geometry.strip_cells(cells, (0, 1), "row")  # just (0,1)
    with pytest.raises(DisconnectionHazard):
        geometry.plan_insert(cells, strip, "right")


def test_plan_delete_round_trip():
    cells = geometry.rasterize(geometry.validate_outline(square(3)))
    strip = geometry.strip_cells(cells, (1, 0), "col")
    plan = geometry.plan_insert(cells, strip, "right")
    grown = (set(cells) - set(plan.moved)) | set(plan.moved.values()) | set(plan.dup)
    assert len(grown) == 12
    dstrip = geometry.strip_cells(grown, (2, 0), "col")
    dplan = geometry.plan_delete(grown, dstrip, "right")
    shrunk = (grown - set(dstrip) - set(dplan.moved)) | set(dplan.moved.values())
    assert shrunk == cells


def test_plan_delete_rejects_disconnection():
    # two arms joined only by the strip cell
    cells = {(0, 0), (1, 0), (2, 0)}
    strip = [(1, 0)]
    plan_ok = geometry.plan_delete(cells, strip, "right")
    assert plan_ok.moved == {(2, 0): (1, 0)}
    vertical = {(0, 0), (0, 1), (0, 2), (1, 2), (1, 0)}
    with pytest.raises(DisconnectionHazard):
        geometry.plan_delete(vertical, [(0, 1)], "right")
