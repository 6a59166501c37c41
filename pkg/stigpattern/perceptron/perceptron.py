"""Stigmergic Perceptron: a rank-ordered bank of receptive fields.

Each window of a day is scored by every field and the scores are combined
into an activity level, the similarity-weighted mean of the field ranks.
"""

import logging
from datetime import date
from typing import List, Optional, Sequence, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from stigpattern.errors import InvalidParameterError, LengthMismatchError, NoActivationError
from stigpattern.series import ActivityLevelSeries, ActivitySeries
from stigpattern.srf import Archetype, Srf, SrfParams, default_archetypes, default_srf_params
from stigpattern.trails import Grid1D

logger = logging.getLogger(__name__)


def activity_level(similarities: Sequence[float]) -> float:
    """``sum(S_i * i) / sum(S_i)`` with ranks i = 1..N.

    Raises:
        NoActivationError: every similarity is zero.
    """
    weights = np.asarray(similarities, dtype=float)
    if weights.ndim != 1 or weights.size == 0:
        raise InvalidParameterError("activity_level needs a non-empty 1-D similarity vector")
    if np.any(weights < 0):
        raise InvalidParameterError("similarities must be >= 0")
    total = weights.sum()
    if total <= 0:
        raise NoActivationError("no receptive field responded")
    return float(weights @ np.arange(1, weights.size + 1) / total)


class StigmergicPerceptron:
    """Receptive fields sorted by archetype rank, plus the sliding-window hop."""

    def __init__(self, srfs: Sequence[Srf], window_hop: Optional[int] = None):
        if not srfs:
            raise InvalidParameterError("a perceptron needs at least one receptive field")
        srfs = sorted(srfs, key=lambda s: s.archetype.rank)
        lengths = {s.window_length for s in srfs}
        if len(lengths) != 1:
            raise LengthMismatchError(f"receptive fields disagree on window length: {sorted(lengths)}")
        self.srfs: List[Srf] = list(srfs)
        self.window = lengths.pop()
        self.window_hop = int(window_hop) if window_hop is not None else max(1, self.window // 2)
        if self.window_hop < 1:
            raise InvalidParameterError(f"window hop must be >= 1, got {window_hop}")

    @classmethod
    def from_params(cls, params: Sequence[SrfParams], archetypes: Optional[Sequence[Archetype]] = None,
                    window_hop: Optional[int] = None, grid: Grid1D = Grid1D()) -> "StigmergicPerceptron":
        archetypes = list(archetypes) if archetypes is not None else default_archetypes()
        if len(params) != len(archetypes):
            raise LengthMismatchError(f"{len(params)} parameter sets for {len(archetypes)} archetypes")
        return cls([Srf(p, a, grid) for p, a in zip(params, archetypes)], window_hop)

    @classmethod
    def from_defaults(cls, archetypes: Optional[Sequence[Archetype]] = None,
                      window_hop: Optional[int] = None) -> "StigmergicPerceptron":
        """Untrained perceptron using the hand-set parameters for every field."""
        archetypes = list(archetypes) if archetypes is not None else default_archetypes()
        return cls.from_params([default_srf_params()] * len(archetypes), archetypes, window_hop)

    @property
    def size(self) -> int:
        return len(self.srfs)

    @property
    def archetype_names(self) -> List[str]:
        return [s.archetype.name for s in self.srfs]

    def windows(self, samples: Sequence[float]) -> np.ndarray:
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 1 or samples.size < self.window:
            raise LengthMismatchError(f"need at least {self.window} samples, got {samples.size}")
        return sliding_window_view(samples, self.window)[::self.window_hop]

    def similarities(self, windows) -> np.ndarray:
        """Score matrix of shape (n_windows, n_fields)."""
        windows = np.atleast_2d(windows)
        return np.column_stack([srf.scores(windows) for srf in self.srfs])

    def levels(self, windows) -> np.ndarray:
        """Activity level per window.

        A window no field responds to repeats the previous level (the
        midpoint of the rank range for the first window).
        """
        scores = self.similarities(windows)
        levels = np.empty(scores.shape[0])
        previous = (self.size + 1) / 2.0
        for i, row in enumerate(scores):
            try:
                previous = activity_level(row)
            except NoActivationError:
                logger.warning("window %d: no receptive field responded, keeping level %.3f", i, previous)
            levels[i] = previous
        return levels

    def characterize(self, samples: Union[ActivitySeries, Sequence[float]],
                     day: Optional[date] = None) -> ActivityLevelSeries:
        hotspot = None
        if isinstance(samples, ActivitySeries):
            day, hotspot, samples = samples.day, samples.hotspot, samples.samples
        return ActivityLevelSeries(day=day, levels=self.levels(self.windows(samples)), hotspot=hotspot)


def characterize_day(sp: StigmergicPerceptron, day_samples: Union[ActivitySeries, Sequence[float]],
                     day: Optional[date] = None) -> ActivityLevelSeries:
    """Turn a day of activity samples into its activity-level series."""
    return sp.characterize(day_samples, day)
