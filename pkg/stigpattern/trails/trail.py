"""Stigmergic trails: mark deposition, evaporation and Jaccard similarity.

A trail evolves one step at a time as ``T_i = max(0, T_{i-1} - delta) + Mark_i``:
the old trail evaporates first, then the step's mark is added.
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Sequence, Union

import numpy as np
from scipy import ndimage

from stigpattern.errors import (
    IncompatibleGridsError,
    InvalidMarkError,
    InvalidParameterError,
    UndefinedSimilarityError,
)
from .grid import Grid1D, Grid2D
from .marks import Mark1D, Mark2D, cone_profile, trapezoid_profile

logger = logging.getLogger(__name__)


class BaseTrail(ABC):
    """Common behaviour of 1-D and 2-D trails.

    Trails are value-like: every operation returns a new trail and leaves the
    receiver untouched.
    """

    def __init__(self, grid, intensity: np.ndarray):
        intensity = np.asarray(intensity, dtype=float)
        if intensity.shape != self._expected_shape(grid):
            raise InvalidParameterError(
                f"intensity shape {intensity.shape} does not match grid {self._expected_shape(grid)}"
            )
        if not np.all(np.isfinite(intensity)) or np.any(intensity < 0):
            raise InvalidParameterError("trail intensities must be finite and >= 0")
        self.grid = grid
        self.intensity = intensity

    @staticmethod
    @abstractmethod
    def _expected_shape(grid) -> tuple:
        pass

    @abstractmethod
    def deposit(self, mark) -> "BaseTrail":
        """Return a new trail with ``mark`` added."""
        pass

    @classmethod
    def empty(cls, grid):
        return cls(grid, np.zeros(cls._expected_shape(grid)))

    def _with(self, intensity: np.ndarray):
        return type(self)(self.grid, intensity)

    def evaporate(self, delta: float) -> "BaseTrail":
        """Subtract ``delta`` from every cell, clamping at zero."""
        _check_delta(delta)
        return self._with(np.maximum(self.intensity - delta, 0.0))

    def scaled(self, factor: float) -> "BaseTrail":
        if factor < 0:
            raise InvalidParameterError(f"scale factor must be >= 0, got {factor}")
        return self._with(self.intensity * factor)

    @property
    def total(self) -> float:
        return float(self.intensity.sum())

    def is_zero(self) -> bool:
        return not np.any(self.intensity > 0)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.intensity, other.intensity)

    def __repr__(self):
        return f"{type(self).__name__}(grid={self.grid!r}, total={self.total:.6g})"


class Trail1D(BaseTrail):
    """Trail over the value axis."""

    @staticmethod
    def _expected_shape(grid: Grid1D) -> tuple:
        return (grid.cells,)

    def deposit(self, mark: Mark1D) -> "Trail1D":
        if not isinstance(mark, Mark1D):
            raise InvalidMarkError(f"Trail1D accepts Mark1D, got {type(mark).__name__}")
        return self._with(self.intensity + mark.evaluate(self.grid.centers))


class Trail2D(BaseTrail):
    """Trail over a spatial grid, indexed [row=y, col=x]."""

    @staticmethod
    def _expected_shape(grid: Grid2D) -> tuple:
        return grid.shape

    def deposit(self, mark: Mark2D) -> "Trail2D":
        if not isinstance(mark, Mark2D):
            raise InvalidMarkError(f"Trail2D accepts Mark2D, got {type(mark).__name__}")
        grid = self.grid
        # Only the cells inside the cone's bounding box can change.
        cols = np.nonzero(np.abs(grid.x_centers - mark.x) < mark.radius)[0]
        rows = np.nonzero(np.abs(grid.y_centers - mark.y) < mark.radius)[0]
        intensity = self.intensity.copy()
        if cols.size and rows.size:
            block = mark.evaluate(grid.x_centers[cols], grid.y_centers[rows])
            intensity[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1] += block
        return self._with(intensity)


Trail = Union[Trail1D, Trail2D]


def _check_delta(delta: float):
    if not math.isfinite(delta) or delta < 0:
        raise InvalidParameterError(f"evaporation delta must be finite and >= 0, got {delta}")


def deposit(trail: Trail, mark: Union[Mark1D, Mark2D]) -> Trail:
    """Add a mark to a trail; marks partly outside the grid are clipped."""
    return trail.deposit(mark)


def evaporate(trail: Trail, delta: float) -> Trail:
    """Evaporate a trail by ``delta`` (clamped subtraction)."""
    return trail.evaporate(delta)


def jaccard(a: Trail, b: Trail) -> float:
    """Fuzzy Jaccard similarity: sum of cellwise min over sum of cellwise max.

    Raises:
        IncompatibleGridsError: trails live on different grids.
        UndefinedSimilarityError: both trails are all-zero.
    """
    if type(a) is not type(b) or a.grid != b.grid:
        raise IncompatibleGridsError(f"cannot compare trails on {a.grid!r} and {b.grid!r}")
    union = np.maximum(a.intensity, b.intensity).sum()
    if union <= 0:
        raise UndefinedSimilarityError("both trails are all-zero")
    return float(np.minimum(a.intensity, b.intensity).sum() / union)


def jaccard_batch(trails: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Jaccard of each row of ``trails`` against ``reference``.

    Rows whose union with the reference is empty come back as NaN.
    """
    trails = np.atleast_2d(trails)
    union = np.maximum(trails, reference).sum(axis=-1)
    inter = np.minimum(trails, reference).sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(union > 0, inter / union, np.nan)


def trails_of_series_batch(windows, width: float, delta: float, height: float = 1.0,
                           grid: Grid1D = Grid1D()) -> np.ndarray:
    """Build the value-axis trails of many equal-length sample windows.

    Args:
        windows: array of shape (M, L) with samples in [0, 1]
        width: mark width (epsilon)
        delta: evaporation per step
        height: mark height
        grid: value-axis grid

    Returns:
        Array of shape (M, grid.cells) holding each window's final trail.
    """
    windows = np.atleast_2d(np.asarray(windows, dtype=float))
    if not np.all(np.isfinite(windows)) or windows.min(initial=0.0) < 0 or windows.max(initial=0.0) > 1:
        raise InvalidParameterError("trail samples must lie in [0, 1]")
    if not (math.isfinite(width) and width > 0 and math.isfinite(height) and height > 0):
        raise InvalidMarkError(f"mark width/height must be finite and > 0, got {width}/{height}")
    _check_delta(delta)

    centers = grid.centers
    trails = np.zeros((windows.shape[0], grid.cells))
    for step in range(windows.shape[1]):
        np.subtract(trails, delta, out=trails)
        np.maximum(trails, 0.0, out=trails)
        trails += trapezoid_profile(centers[np.newaxis, :] - windows[:, step:step + 1], width, height)
    return trails


def trail_of_series(samples: Sequence[float], width: float, delta: float, height: float = 1.0,
                    grid: Grid1D = Grid1D()) -> Trail1D:
    """Fold evaporate-then-deposit over ``samples`` in order."""
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1 or samples.size == 0:
        raise InvalidParameterError("trail_of_series needs a non-empty 1-D sample sequence")
    return Trail1D(grid, trails_of_series_batch(samples[np.newaxis, :], width, delta, height, grid)[0])


def cone_kernel(grid: Grid2D, base_radius: float) -> np.ndarray:
    """Cone of unit height sampled at cell-center offsets, centered in an odd-sized array."""
    if not (math.isfinite(base_radius) and base_radius > 0):
        raise InvalidMarkError(f"cone radius must be finite and > 0, got {base_radius}")
    kx = int(math.ceil(base_radius / grid.cell_width))
    ky = int(math.ceil(base_radius / grid.cell_height))
    dx = np.arange(-kx, kx + 1) * grid.cell_width
    dy = np.arange(-ky, ky + 1) * grid.cell_height
    return cone_profile(np.hypot(dx[np.newaxis, :], dy[:, np.newaxis]), base_radius, 1.0)


def deposit_grid_aligned(trail: Trail2D, heights: np.ndarray, base_radius: float,
                         kernel: np.ndarray = None) -> Trail2D:
    """Deposit one cone per cell, centered on the cell, with height ``heights[y, x]``.

    Equivalent to depositing every non-zero cell's ``Mark2D`` one by one.
    """
    heights = np.asarray(heights, dtype=float)
    if heights.shape != trail.grid.shape:
        raise IncompatibleGridsError(f"heights shape {heights.shape} != grid shape {trail.grid.shape}")
    if np.any(heights < 0) or not np.all(np.isfinite(heights)):
        raise InvalidMarkError("cone heights must be finite and >= 0")
    if kernel is None:
        kernel = cone_kernel(trail.grid, base_radius)
    spread = ndimage.convolve(heights, kernel, mode="constant", cval=0.0)
    return trail._with(trail.intensity + np.maximum(spread, 0.0))
