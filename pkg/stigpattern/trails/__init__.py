"""Pheromone medium: grids, marks, trails and their export."""

from .grid import Grid1D, Grid2D
from .marks import Mark1D, Mark2D, cone_profile, trapezoid_profile
from .trail import (
    BaseTrail,
    Trail,
    Trail1D,
    Trail2D,
    cone_kernel,
    deposit,
    deposit_grid_aligned,
    evaporate,
    jaccard,
    jaccard_batch,
    trail_of_series,
    trails_of_series_batch,
)
from .export import matrix_to_pgm, trail_to_csv, trail_to_pgm

__all__ = [
    "Grid1D",
    "Grid2D",
    "Mark1D",
    "Mark2D",
    "cone_profile",
    "trapezoid_profile",
    "BaseTrail",
    "Trail",
    "Trail1D",
    "Trail2D",
    "cone_kernel",
    "deposit",
    "deposit_grid_aligned",
    "evaporate",
    "jaccard",
    "jaccard_batch",
    "trail_of_series",
    "trails_of_series_batch",
    "matrix_to_pgm",
    "trail_to_csv",
    "trail_to_pgm",
]
