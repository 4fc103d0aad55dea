"""Built-in template patterns.

Each builder runs the engine from scratch, so templates are ordinary
operation logs whose replay is the template. The compound skirt walks the
full feature workflow: a two-layer skirt whose lower layer is gathered for
volume, waistline cinched with alternating right-folding pleats, and a dart
at each side seam for waist-to-hip shaping.
"""

from __future__ import annotations

from . import edits, pattern as pat
from .config import PatternConfig
from .errors import CorruptDocument
from .pattern import Pattern


def _rect(w, h, x0=0, y0=0):
    return [(x0, y0), (x0 + w, y0), (x0 + w, y0 + h), (x0, y0 + h)]


def _require(result):
    if not result.accepted:
        raise CorruptDocument(
            f"template edit rejected: {result.reason}: {result.detail}"
        )


def tee(config: PatternConfig | None = None) -> Pattern:
    """Boxy tee: front and back bodies, two sleeves split over the shoulder."""
    p = pat.new_pattern(config)
    front = pat.add_panel(p, _rect(8, 8), name="front")
    back = pat.add_panel(p, _rect(8, 8, x0=10), name="back")
    left_sleeve = pat.add_panel(p, _rect(4, 3, x0=0, y0=-5), name="left sleeve")
    right_sleeve = pat.add_panel(p, _rect(4, 3, x0=6, y0=-5), name="right sleeve")
    pat.enter_stitch_phase(p)
    # shoulders: outer two units of each top edge
    for panel, x0 in ((front, 0), (back, 10)):
        pat.insert_break_point(p, panel, (x0 + 2, 8))
        pat.insert_break_point(p, panel, (x0 + 6, 8))
    pat.stitch(p, {"panel": front, "a": [0, 8], "b": [2, 8]},
               {"panel": back, "a": [10, 8], "b": [12, 8]})
    pat.stitch(p, {"panel": front, "a": [6, 8], "b": [8, 8]},
               {"panel": back, "a": [16, 8], "b": [18, 8]})
    # side seams: lower six units of the sides
    for panel, x0 in ((front, 0), (back, 10)):
        pat.insert_break_point(p, panel, (x0, 6))
        pat.insert_break_point(p, panel, (x0 + 8, 6))
    pat.stitch(p, {"panel": front, "a": [0, 0], "b": [0, 6]},
               {"panel": back, "a": [18, 0], "b": [18, 6]})
    pat.stitch(p, {"panel": front, "a": [8, 0], "b": [8, 6]},
               {"panel": back, "a": [10, 0], "b": [10, 6]})
    # each sleeve top edge splits in half, one half per armhole side
    pat.insert_break_point(p, left_sleeve, (2, -2))
    pat.insert_break_point(p, right_sleeve, (8, -2))
    pat.stitch(p, {"panel": left_sleeve, "a": [0, -2], "b": [2, -2]},
               {"panel": front, "a": [0, 6], "b": [0, 8]})
    pat.stitch(p, {"panel": left_sleeve, "a": [2, -2], "b": [4, -2]},
               {"panel": back, "a": [10, 6], "b": [10, 8]})
    pat.stitch(p, {"panel": right_sleeve, "a": [6, -2], "b": [8, -2]},
               {"panel": front, "a": [8, 6], "b": [8, 8]})
    pat.stitch(p, {"panel": right_sleeve, "a": [8, -2], "b": [10, -2]},
               {"panel": back, "a": [18, 6], "b": [18, 8]})
    pat.enter_features_phase(p)
    return p


def skirt(config: PatternConfig | None = None) -> Pattern:
    """Straight skirt: front and back stitched at both sides."""
    p = pat.new_pattern(config)
    front = pat.add_panel(p, _rect(8, 6), name="front")
    back = pat.add_panel(p, _rect(8, 6, x0=10), name="back")
    pat.enter_stitch_phase(p)
    pat.stitch(p, {"panel": front, "a": [0, 0], "b": [0, 6]},
               {"panel": back, "a": [18, 0], "b": [18, 6]})
    pat.stitch(p, {"panel": front, "a": [8, 0], "b": [8, 6]},
               {"panel": back, "a": [10, 0], "b": [10, 6]})
    pat.enter_features_phase(p)
    return p


def trousers(config: PatternConfig | None = None) -> Pattern:
    """Trousers front and back with a crotch notch, seamed at sides and inseams."""
    p = pat.new_pattern(config)
    front_outline = [(0, 0), (3, 0), (3, 4), (5, 4), (5, 0), (8, 0), (8, 10), (0, 10)]
    back_outline = [(10, 0), (13, 0), (13, 4), (15, 4), (15, 0), (18, 0),
                    (18, 10), (10, 10)]
    front = pat.add_panel(p, front_outline, name="front")
    back = pat.add_panel(p, back_outline, name="back")
    pat.enter_stitch_phase(p)
    pat.stitch(p, {"panel": front, "a": [0, 0], "b": [0, 10]},
               {"panel": back, "a": [18, 0], "b": [18, 10]})
    pat.stitch(p, {"panel": front, "a": [8, 0], "b": [8, 10]},
               {"panel": back, "a": [10, 0], "b": [10, 10]})
    pat.stitch(p, {"panel": front, "a": [3, 0], "b": [3, 4]},
               {"panel": back, "a": [13, 0], "b": [13, 4]})
    pat.stitch(p, {"panel": front, "a": [5, 0], "b": [5, 4]},
               {"panel": back, "a": [15, 0], "b": [15, 4]})
    pat.enter_features_phase(p)
    return p


def compound_skirt(config: PatternConfig | None = None) -> Pattern:
    """Two-layer compound skirt exercising the full feature workflow."""
    p = pat.new_pattern(config)
    band_f = pat.add_panel(p, _rect(8, 2), name="band front")
    band_b = pat.add_panel(p, _rect(8, 2, x0=12), name="band back")
    skirt_f = pat.add_panel(p, _rect(8, 4, y0=-6), name="skirt front")
    skirt_b = pat.add_panel(p, _rect(8, 4, x0=12, y0=-6), name="skirt back")
    pat.enter_stitch_phase(p)
    # layer seams: band bottoms to skirt tops
    pat.stitch(p, {"panel": band_f, "a": [0, 0], "b": [8, 0]},
               {"panel": skirt_f, "a": [0, -2], "b": [8, -2]})
    pat.stitch(p, {"panel": band_b, "a": [12, 0], "b": [20, 0]},
               {"panel": skirt_b, "a": [12, -2], "b": [20, -2]})
    # side seams on both layers
    pat.stitch(p, {"panel": band_f, "a": [8, 0], "b": [8, 2]},
               {"panel": band_b, "a": [12, 0], "b": [12, 2]})
    pat.stitch(p, {"panel": band_f, "a": [0, 0], "b": [0, 2]},
               {"panel": band_b, "a": [20, 0], "b": [20, 2]})
    pat.stitch(p, {"panel": skirt_f, "a": [8, -6], "b": [8, -2]},
               {"panel": skirt_b, "a": [12, -6], "b": [12, -2]})
    pat.stitch(p, {"panel": skirt_f, "a": [0, -6], "b": [0, -2]},
               {"panel": skirt_b, "a": [20, -6], "b": [20, -2]})
    pat.enter_features_phase(p)

    # step 3: gather the lower layer where it meets the band
    _require(edits.gather_edge(p, {"panel": skirt_f, "a": [0, -2], "b": [8, -2]}))
    _require(edits.gather_edge(p, {"panel": skirt_b, "a": [12, -2], "b": [20, -2]}))
    # step 4: convert every other waistline unit into right-folding pleats
    for x in (0, 2, 4, 6):
        _require(edits.convert_to_pleat(p, band_f, (x, 1), "right"))
        _require(edits.convert_to_pleat(p, band_b, (12 + x, 1), "right"))
    # step 5: darts aligned across the two skirt side seams
    _require(edits.add_dart(p, skirt_f, (0, -4), "v", p.config.base_unit, 1))
    _require(edits.add_dart(p, skirt_f, (16, -4), "v", p.config.base_unit, 1))
    return p


BUILDERS = {
    "tee": tee,
    "skirt": skirt,
    "trousers": trousers,
    "compound-skirt": compound_skirt,
}


def build(name: str, config: PatternConfig | None = None) -> Pattern:
    if name not in BUILDERS:
        raise CorruptDocument(
            f"unknown template {name!r}; available: {', '.join(sorted(BUILDERS))}"
        )
    return BUILDERS[name](config)


def names() -> list[str]:
    return sorted(BUILDERS)
