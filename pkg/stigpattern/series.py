"""Per-day activity series shared by the hotspot, perceptron and clustering stages."""

from dataclasses import dataclass, field
from datetime import date
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class ActivitySeries:
    """Normalized activity samples of one hotspot over one day."""

    day: date
    samples: np.ndarray = field(compare=False)
    hotspot: Optional[str] = None
    sampling_minutes: int = 5
    empty: bool = False

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=float))

    def __len__(self):
        return int(self.samples.size)


@dataclass(frozen=True)
class ActivityLevelSeries:
    """Activity levels (in [1, N]) of one day, one per perceptron window."""

    day: date
    levels: np.ndarray = field(compare=False)
    hotspot: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "levels", np.asarray(self.levels, dtype=float))

    def __len__(self):
        return int(self.levels.size)
