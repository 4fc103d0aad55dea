"""gridstitch: modular garment patterns on a unit grid.

Panels are rectilinear cell regions stitched by planar seam matchings;
gathers, pleats, and darts edit them under strict grid and seam-ratio
constraints; an exact solver decomposes the result into the fewest square
modules; exports produce SVG cutting guides and simulation meshes.
"""

from .config import PatternConfig, connector_positions
from .document import apply_op, dumps, from_doc, load, loads, save, to_doc, undo
from .edits import (
    EditResult,
    add_dart,
    convert_to_pleat,
    delete_strip,
    gather_edge,
    insert_pleat,
    insert_strip,
    resolve_by_delete,
    resolve_by_expand,
)
from .pattern import (
    Pattern,
    add_panel,
    canonical_view,
    enter_features_phase,
    enter_stitch_phase,
    fold_accounting,
    insert_break_point,
    new_pattern,
    stitch,
    validate_pattern,
)

__version__ = "0.1.0"
