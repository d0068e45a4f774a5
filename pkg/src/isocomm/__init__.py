"""Message-combining schedules for isomorphic sparse collectives on tori."""

from isocomm.torus import TorusShape, coord_of, l1_norm, rank_of, torus_add, torus_sub
from isocomm.neighborhood import (
    BlockSizeMap,
    Neighborhood,
    NeighborhoodMetrics,
    gen_irregular_sizes,
    gen_moore,
    gen_octant,
    gen_shales,
    metrics,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "BlockSizeMap",
    "Neighborhood",
    "NeighborhoodMetrics",
    "TorusShape",
    "coord_of",
    "gen_irregular_sizes",
    "gen_moore",
    "gen_octant",
    "gen_shales",
    "l1_norm",
    "metrics",
    "rank_of",
    "torus_add",
    "torus_sub",
    "validate",
]
