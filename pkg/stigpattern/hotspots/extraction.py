"""Hotspots: regions whose trails are relevant across several time slots."""

import logging
import string
from dataclasses import dataclass, field
from typing import FrozenSet, List, Mapping, Sequence, Tuple, Union

import numpy as np
from scipy import ndimage

from stigpattern.errors import IncompatibleGridsError, InvalidParameterError
from stigpattern.trails import Grid2D, Trail2D

logger = logging.getLogger(__name__)

EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


@dataclass(frozen=True)
class Hotspot:
    """Labeled set of 8-connected cells, given as (ix, iy) pairs."""

    id: str
    cells: FrozenSet[Tuple[int, int]] = field(compare=False)
    centroid: Tuple[float, float]
    intensity: float = 0.0

    def __post_init__(self):
        if not self.cells:
            raise InvalidParameterError(f"hotspot {self.id} has no cells")

    @property
    def area(self) -> int:
        return len(self.cells)

    def contains_cell(self, ix: int, iy: int) -> bool:
        return (int(ix), int(iy)) in self.cells

    def mask(self, grid: Grid2D) -> np.ndarray:
        out = np.zeros(grid.shape, dtype=bool)
        ix, iy = zip(*self.cells)
        out[list(iy), list(ix)] = True
        return out


def hotspot_label(index: int) -> str:
    """A, B, ..., Z, AA, AB, ..."""
    letters = string.ascii_uppercase
    label = ""
    index += 1
    while index:
        index, rem = divmod(index - 1, 26)
        label = letters[rem] + label
    return label


def relevant_cells(trail: Trail2D, relevance_quantile: float) -> np.ndarray:
    """Cells at or above the quantile of the trail's nonzero intensities."""
    nonzero = trail.intensity > 0
    if not nonzero.any():
        return nonzero
    threshold = np.quantile(trail.intensity[nonzero], relevance_quantile)
    return nonzero & (trail.intensity >= threshold)


def extract_hotspots(slot_trails: Union[Sequence[Trail2D], Mapping[object, Trail2D]],
                     relevance_quantile: float = 0.9, min_slots: int = 4,
                     min_area: int = 4) -> List[Hotspot]:
    """Connected regions of cells relevant in at least ``min_slots`` slot trails.

    Args:
        slot_trails: the slot trails, all on one grid (a sequence or a slot -> trail mapping)
        relevance_quantile: per-slot quantile of nonzero intensities a cell must reach
        min_slots: how many slots a cell must be relevant in (all of them = strict intersection)
        min_area: smallest component, in cells, kept as a hotspot

    Returns:
        Hotspots labeled A, B, ... by descending total intensity; empty when nothing is relevant
    """
    trails = list(slot_trails.values()) if isinstance(slot_trails, Mapping) else list(slot_trails)
    if not trails:
        raise InvalidParameterError("extract_hotspots needs at least one slot trail")
    grid = trails[0].grid
    if any(t.grid != grid for t in trails):
        raise IncompatibleGridsError("slot trails must share one grid")
    if not 0 <= relevance_quantile <= 1:
        raise InvalidParameterError(f"relevance quantile must be in [0, 1], got {relevance_quantile}")
    if not 1 <= min_slots <= len(trails):
        raise InvalidParameterError(f"min_slots must be in [1, {len(trails)}], got {min_slots}")
    if min_area < 1:
        raise InvalidParameterError(f"min_area must be >= 1, got {min_area}")

    votes = np.sum([relevant_cells(t, relevance_quantile) for t in trails], axis=0)
    keep = votes >= min_slots
    labels, count = ndimage.label(keep, structure=EIGHT_CONNECTED)
    stacked = np.sum([t.intensity for t in trails], axis=0)

    components = []
    for k in range(1, count + 1):
        iy, ix = np.nonzero(labels == k)
        if iy.size < min_area:
            continue
        weights = stacked[iy, ix]
        total = float(weights.sum())
        w = weights if total > 0 else None
        cx = float(np.average(grid.x_centers[ix], weights=w))
        cy = float(np.average(grid.y_centers[iy], weights=w))
        first = (int(iy.min()), int(ix[iy == iy.min()].min()))
        components.append((total, first, frozenset(zip(ix.tolist(), iy.tolist())), (cx, cy)))

    components.sort(key=lambda c: (-c[0], c[1]))
    hotspots = [Hotspot(hotspot_label(i), cells, centroid, total)
                for i, (total, _, cells, centroid) in enumerate(components)]
    logger.info("extracted %d hotspot(s) from %d candidate region(s)", len(hotspots), count)
    return hotspots
