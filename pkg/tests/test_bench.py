from gridstitch.cover import HAVE_COMPILED, bench


def test_random_removal_board_is_seeded():
    a = bench.random_removal_board(10, 0.1, 7)
    b = bench.random_removal_board(10, 0.1, 7)
    c = bench.random_removal_board(10, 0.1, 8)
    assert a == b
    assert a != c
    assert len(a) == 90


def test_benchmark_rows_shape():
    rows = bench.benchmark_suite([4, 6], [0.0, 0.1], [0], budget_s=30)
    assert len(rows) == 4
    for row in rows:
        assert set(row) == {"instance", "cells", "variables", "runtime_ms",
                            "modules", "optimal", "backend"}
        assert row["optimal"] is True
    # variable count grows with board area
    by_size = {r["instance"]: r["variables"] for r in rows}
    assert by_size["6x6-r00-s0"] > by_size["4x4-r00-s0"]


def test_kernel_comparison_rows():
    rows = bench.kernel_comparison(sizes=(6, 10), budget_s=30)
    assert len(rows) == 2
    for row in rows:
        assert "bb-py_ms" in row
        if HAVE_COMPILED:
            assert "bb-c_ms" in row and "speedup" in row


def test_report_svg_renders():
    rows = bench.benchmark_suite([4], [0.0], [0], budget_s=30)
    svg = bench.render_report_svg(rows)
    import xml.etree.ElementTree as ET

    ET.fromstring(svg)
    assert "4x4-r00-s0" in svg


def test_format_table():
    rows = [{"a": 1, "b": "xy"}, {"a": 22, "b": "z"}]
    text = bench.format_table(rows)
    assert text.splitlines()[0].split("\t")[0].strip() == "a"
    assert len(text.splitlines()) == 3
