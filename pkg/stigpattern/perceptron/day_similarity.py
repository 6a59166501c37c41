"""Receptive field that compares two days' activity-level series.

One day's levels play the role of the archetype; there is no clumping stage.
Levels are divided by the number of archetypes so they fit the [0, 1] value
axis shared with the other fields.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from datetime import date
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from stigpattern.errors import InvalidParameterError, LengthMismatchError
from stigpattern.series import ActivityLevelSeries
from stigpattern.trails import Grid1D, jaccard_batch, trails_of_series_batch
from stigpattern.training import DeConfig, DeResult, differential_evolution, squared_error_fitness
from stigpattern.transforms import SigmoidParams, sigmoid

logger = logging.getLogger(__name__)

N_LEVELS = 7
DAY_PARAM_NAMES = ("mark_width", "evaporation", "activation_steepness", "activation_threshold")
# activation steepness is capped lower than for the archetype fields
DAY_PARAM_BOUNDS = ((0.01, 0.5), (0.0, 1.0), (1.0, 40.0), (0.0, 1.0))


@dataclass(frozen=True)
class DaySimilarityParams:
    mark_width: float = 0.1
    evaporation: float = 0.2
    activation: SigmoidParams = SigmoidParams(steepness=20.0, threshold=0.6)

    def __post_init__(self):
        if not (math.isfinite(self.mark_width) and self.mark_width > 0):
            raise InvalidParameterError(f"mark width must be finite and > 0, got {self.mark_width}")
        if not (math.isfinite(self.evaporation) and self.evaporation >= 0):
            raise InvalidParameterError(f"evaporation must be finite and >= 0, got {self.evaporation}")

    def to_vector(self) -> np.ndarray:
        return np.array([self.mark_width, self.evaporation, self.activation.steepness,
                         self.activation.threshold])

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> "DaySimilarityParams":
        v = [float(x) for x in vector]
        if len(v) != len(DAY_PARAM_NAMES):
            raise InvalidParameterError(f"expected {len(DAY_PARAM_NAMES)} parameters, got {len(v)}")
        return cls(v[0], v[1], SigmoidParams(v[2], v[3]))

    def to_dict(self) -> Dict[str, float]:
        return dict(zip(DAY_PARAM_NAMES, (float(x) for x in self.to_vector())))

    @classmethod
    def from_dict(cls, values: Dict[str, float]) -> "DaySimilarityParams":
        return cls.from_vector([values[name] for name in DAY_PARAM_NAMES])


class DaySimilaritySrf:
    """Similarity between activity-level series of two days."""

    def __init__(self, params: DaySimilarityParams = DaySimilarityParams(), n_levels: int = N_LEVELS,
                 grid: Grid1D = Grid1D()):
        self.params = params
        self.n_levels = n_levels
        self.grid = grid

    def with_params(self, params: DaySimilarityParams) -> "DaySimilaritySrf":
        return DaySimilaritySrf(params, self.n_levels, self.grid)

    def trails(self, level_rows) -> np.ndarray:
        scaled = np.clip(np.atleast_2d(np.asarray(level_rows, dtype=float)) / self.n_levels, 0.0, 1.0)
        return trails_of_series_batch(scaled, self.params.mark_width, self.params.evaporation, 1.0, self.grid)

    def pairwise(self, left_trails: np.ndarray, right_trails: np.ndarray) -> np.ndarray:
        """Activated similarity of row-aligned trail pairs."""
        union = np.maximum(left_trails, right_trails).sum(axis=1)
        inter = np.minimum(left_trails, right_trails).sum(axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            raw = np.where(union > 0, inter / union, 0.0)
        return np.atleast_1d(sigmoid(raw, self.params.activation))

    def against(self, levels, references) -> np.ndarray:
        """Similarity of one level series against each row of ``references``."""
        raw = jaccard_batch(self.trails(references), self.trails(levels)[0])
        return np.atleast_1d(sigmoid(np.nan_to_num(raw, nan=0.0), self.params.activation))


def _levels(series) -> np.ndarray:
    return series.levels if isinstance(series, ActivityLevelSeries) else np.asarray(series, dtype=float)


def day_similarity(dsrf: DaySimilaritySrf, a, b) -> float:
    """Activated Jaccard similarity between the trails of two days' levels."""
    a, b = _levels(a), _levels(b)
    if a.shape != b.shape:
        raise LengthMismatchError(f"level series differ in length: {a.size} vs {b.size}")
    trails = dsrf.trails(np.vstack([a, b]))
    return float(dsrf.pairwise(trails[:1], trails[1:])[0])


@dataclass(frozen=True)
class LabeledPair:
    """Two days' levels with target 1 when they belong to the same behavioural class."""

    a: np.ndarray
    b: np.ndarray
    target: float

    def __post_init__(self):
        object.__setattr__(self, "a", _levels(self.a))
        object.__setattr__(self, "b", _levels(self.b))
        if self.a.shape != self.b.shape:
            raise LengthMismatchError(f"pair levels differ in length: {self.a.size} vs {self.b.size}")
        if self.target not in (0.0, 1.0):
            raise InvalidParameterError(f"pair target must be 0 or 1, got {self.target}")


class PairObjective:
    """MSE of a day-similarity parameter vector over labeled pairs."""

    def __init__(self, dsrf: DaySimilaritySrf, pairs: Sequence[LabeledPair]):
        if not pairs:
            raise InvalidParameterError("day-similarity training needs at least one labeled pair")
        self.dsrf = dsrf
        self.left = np.vstack([p.a for p in pairs])
        self.right = np.vstack([p.b for p in pairs])
        self.targets = np.array([p.target for p in pairs])

    def __call__(self, vector) -> float:
        dsrf = self.dsrf.with_params(DaySimilarityParams.from_vector(vector))
        computed = dsrf.pairwise(dsrf.trails(self.left), dsrf.trails(self.right))
        return squared_error_fitness(computed, self.targets)


def train_day_similarity_run(dsrf: DaySimilaritySrf, labeled_pairs: Sequence[LabeledPair],
                             config: DeConfig) -> Tuple[DaySimilarityParams, DeResult]:
    objective = PairObjective(dsrf, labeled_pairs)
    result = differential_evolution(objective, config.with_bounds(DAY_PARAM_BOUNDS),
                                    initial=dsrf.params.to_vector())
    logger.info("day-similarity training on %d pairs: fitness %.5g", len(labeled_pairs), result.fun)
    return DaySimilarityParams.from_vector(result.x), result


def train_day_similarity(dsrf: DaySimilaritySrf, labeled_pairs: Sequence[LabeledPair],
                         config: DeConfig) -> DaySimilarityParams:
    """DE over mark width, evaporation and activation, minimizing pair MSE."""
    return train_day_similarity_run(dsrf, labeled_pairs, config)[0]


def make_labeled_pairs(levels_by_day: Dict[date, ActivityLevelSeries], day_class: Callable[[date], str],
                       max_pairs: int = 300, seed: int = 0) -> List[LabeledPair]:
    """Sample pairs of distinct days; target is 1 when ``day_class`` agrees.

    Args:
        levels_by_day: day -> activity-level series
        day_class: calendar rule naming each day's behavioural class
        max_pairs: cap on the number of pairs (all pairs when fewer exist)
        seed: seed of the subsampling

    Returns:
        List of LabeledPair in a deterministic order
    """
    days = sorted(levels_by_day)
    combos = list(itertools.combinations(days, 2))
    if not combos:
        raise InvalidParameterError("need at least two days to build pairs")
    if len(combos) > max_pairs:
        rng = np.random.default_rng(seed)
        picked = np.sort(rng.choice(len(combos), size=max_pairs, replace=False))
        combos = [combos[i] for i in picked]
    return [
        LabeledPair(levels_by_day[d1].levels, levels_by_day[d2].levels,
                    1.0 if day_class(d1) == day_class(d2) else 0.0)
        for d1, d2 in combos
    ]
