"""Day-to-day similarity matrices built with the day-similarity field."""

import logging
from dataclasses import dataclass, field
from datetime import date
from typing import List, Sequence, Tuple

import numpy as np

from stigpattern.errors import InvalidParameterError, LengthMismatchError
from stigpattern.perceptron import DaySimilaritySrf
from stigpattern.series import ActivityLevelSeries

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric matrix of day similarities with a unit diagonal."""

    days: Tuple[date, ...]
    values: np.ndarray = field(compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "days", tuple(self.days))
        if values.ndim != 2 or values.shape[0] != values.shape[1] or values.shape[0] != len(self.days):
            raise LengthMismatchError(f"{values.shape} matrix for {len(self.days)} days")
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return len(self.days)

    def row(self, day: date) -> np.ndarray:
        return self.values[self.days.index(day)]


def _level_matrix(day_series: Sequence[ActivityLevelSeries]) -> np.ndarray:
    lengths = {len(s) for s in day_series}
    if len(lengths) != 1:
        raise LengthMismatchError(f"activity-level series have mixed lengths {sorted(lengths)}")
    return np.vstack([s.levels for s in day_series])


def build_similarity_matrix(day_series: Sequence[ActivityLevelSeries], dsrf: DaySimilaritySrf) -> SimilarityMatrix:
    """All pairwise day similarities; the diagonal is set to 1."""
    if len(day_series) < 2:
        raise InvalidParameterError(f"need at least 2 days, got {len(day_series)}")
    trails = dsrf.trails(_level_matrix(day_series))
    n = len(day_series)
    values = np.eye(n)
    for i in range(n - 1):
        upper = dsrf.pairwise(np.repeat(trails[i:i + 1], n - i - 1, axis=0), trails[i + 1:])
        values[i, i + 1:] = upper
        values[i + 1:, i] = upper
    logger.info("similarity matrix over %d day(s), mean off-diagonal %.3f", n,
                (values.sum() - n) / max(n * (n - 1), 1))
    return SimilarityMatrix(tuple(s.day for s in day_series), values)


def similarity_rows(day_series: Sequence[ActivityLevelSeries], reference: Sequence[ActivityLevelSeries],
                    dsrf: DaySimilaritySrf) -> np.ndarray:
    """Similarity of each day in ``day_series`` to every reference (training) day.

    A day that is also a reference day gets 1 against itself, as in the
    training matrix.
    """
    refs = _level_matrix(list(reference))
    days = _level_matrix(list(day_series))
    if refs.shape[1] != days.shape[1]:
        raise LengthMismatchError(f"level series of length {days.shape[1]} vs training length {refs.shape[1]}")
    ref_trails = dsrf.trails(refs)
    day_trails = dsrf.trails(days)
    ref_days: List[date] = [s.day for s in reference]
    rows = np.empty((len(day_series), len(reference)))
    for i, series in enumerate(day_series):
        rows[i] = dsrf.pairwise(np.repeat(day_trails[i:i + 1], len(reference), axis=0), ref_trails)
        if series.day in ref_days:
            rows[i, ref_days.index(series.day)] = 1.0
    return rows
