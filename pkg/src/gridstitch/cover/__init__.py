from .candidates import enumerate_candidates
from .oracle import oracle_min_cover
from .solver import (
    HAVE_COMPILED,
    Assembly,
    ModuleSupply,
    Placement,
    foundation_regions,
    solve_cover,
    solve_region,
    verify_assembly,
)
