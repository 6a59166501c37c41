"""Daily time slots and the per-slot spatial trails."""

import logging
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np
import polars as pl

from stigpattern.trails import Trail2D, cone_kernel, deposit_grid_aligned, evaporate
from stigpattern.transforms import SigmoidParams, smooth
from .binning import BinnedActivity

logger = logging.getLogger(__name__)


class TimeSlot(Enum):
    """Four six-hour slots; (first hour, last hour) both inclusive, Night wraps past midnight."""

    EARLY_MORNING = (3, 8)
    MORNING = (9, 14)
    AFTERNOON_EVENING = (15, 20)
    NIGHT = (21, 2)

    @property
    def hours(self) -> Tuple[int, ...]:
        first, last = self.value
        return tuple((first + k) % 24 for k in range((last - first) % 24 + 1))

    def contains_hour(self, hour: int) -> bool:
        return hour % 24 in self.hours

    @classmethod
    def of_hour(cls, hour: int) -> "TimeSlot":
        for slot in cls:
            if slot.contains_hour(hour):
                return slot
        raise ValueError(f"hour {hour} belongs to no slot")

    @property
    def label(self) -> str:
        return "".join(part.capitalize() for part in self.name.split("_"))


def slot_steps(binned: BinnedActivity, slot: TimeSlot) -> List[Tuple[int, int]]:
    """(day index, step) pairs of the slot over the whole period, in time order."""
    steps = []
    for d in range(len(binned.days)):
        for step in range(binned.config.steps_per_day):
            hour = (step * binned.config.step_minutes) // 60
            if slot.contains_hour(hour):
                steps.append((d, step))
    return steps


def slot_trail(binned: BinnedActivity, slot: TimeSlot, smooth_params: SigmoidParams,
               mark_base_radius: float, delta: float) -> Trail2D:
    """Trail of one time slot over the analysis period.

    Each step evaporates the trail by ``delta`` and then deposits one
    truncated cone per active bin, with height equal to the smoothed
    normalized bin value. The trail carries over from one day to the next.
    """
    grid = binned.grid
    kernel = cone_kernel(grid, mark_base_radius)
    day_index = {day: i for i, day in enumerate(binned.days)}
    in_slot = binned.frame.filter(
        (((pl.col("step") * binned.config.step_minutes) // 60).is_in(list(slot.hours)))
    )
    by_step: Dict[Tuple[int, int], pl.DataFrame] = {}
    for (day, step), group in in_slot.partition_by(["day", "step"], as_dict=True).items():
        by_step[(day_index[day], step)] = group

    trail = Trail2D.empty(grid)
    for key in slot_steps(binned, slot):
        trail = evaporate(trail, delta)
        group = by_step.get(key)
        if group is None:
            continue
        heights = np.zeros(grid.shape)
        heights[group["iy"].to_numpy(), group["ix"].to_numpy()] = smooth(group["norm"].to_numpy(), smooth_params)
        trail = deposit_grid_aligned(trail, heights, mark_base_radius, kernel)
    logger.info("%s trail: total intensity %.4g", slot.label, trail.total)
    return trail


def slot_trails(binned: BinnedActivity, smooth_params: SigmoidParams, mark_base_radius: float,
                delta: float, slots: Sequence[TimeSlot] = tuple(TimeSlot),
                workers: int = 1) -> Dict[TimeSlot, Trail2D]:
    """Trails of several slots; slots are independent and may build in parallel threads."""
    def build(slot):
        return slot_trail(binned, slot, smooth_params, mark_base_radius, delta)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            trails = list(pool.map(build, slots))
    else:
        trails = [build(slot) for slot in slots]
    return dict(zip(slots, trails))
