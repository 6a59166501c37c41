"""Discretization grids for 1-D (value axis) and 2-D (spatial) trails."""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from stigpattern.errors import InvalidParameterError


def _check_bounds(lo: float, hi: float, cells: int, axis: str):
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise InvalidParameterError(f"{axis}: bounds must be finite with lo < hi, got [{lo}, {hi}]")
    if int(cells) != cells or cells < 2:
        raise InvalidParameterError(f"{axis}: need an integer cell count >= 2, got {cells}")


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid over the value axis [lo, hi]."""

    lo: float = 0.0
    hi: float = 1.0
    cells: int = 100

    def __post_init__(self):
        _check_bounds(self.lo, self.hi, self.cells, "Grid1D")

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / self.cells

    @cached_property
    def centers(self) -> np.ndarray:
        return self.lo + (np.arange(self.cells) + 0.5) * self.step


@dataclass(frozen=True)
class Grid2D:
    """Uniform spatial grid; intensity matrices are indexed [row=y, col=x]."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    nx: int
    ny: int

    def __post_init__(self):
        _check_bounds(self.x_lo, self.x_hi, self.nx, "Grid2D.x")
        _check_bounds(self.y_lo, self.y_hi, self.ny, "Grid2D.y")

    @property
    def shape(self):
        return (self.ny, self.nx)

    @property
    def cell_width(self) -> float:
        return (self.x_hi - self.x_lo) / self.nx

    @property
    def cell_height(self) -> float:
        return (self.y_hi - self.y_lo) / self.ny

    @cached_property
    def x_centers(self) -> np.ndarray:
        return self.x_lo + (np.arange(self.nx) + 0.5) * self.cell_width

    @cached_property
    def y_centers(self) -> np.ndarray:
        return self.y_lo + (np.arange(self.ny) + 0.5) * self.cell_height

    def contains(self, x, y):
        """Boolean mask of points inside the closed bounding box."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return (x >= self.x_lo) & (x <= self.x_hi) & (y >= self.y_lo) & (y <= self.y_hi)

    def cell_index(self, x, y):
        """Map in-bounds coordinates to (ix, iy) cell indices.

        Cells are (lo, hi] intervals, so a point on a shared boundary goes to
        the lower-index cell; the grid's lower edge belongs to cell 0.
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        ix = np.ceil((x - self.x_lo) / self.cell_width).astype(np.int64) - 1
        iy = np.ceil((y - self.y_lo) / self.cell_height).astype(np.int64) - 1
        return np.clip(ix, 0, self.nx - 1), np.clip(iy, 0, self.ny - 1)

    def cell_center(self, ix: int, iy: int):
        return float(self.x_centers[ix]), float(self.y_centers[iy])
