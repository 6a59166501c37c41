"""Stigmergic Receptive Field: clumping -> marking -> trailing -> similarity -> activation."""

import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, Sequence

import numpy as np

from stigpattern.errors import InvalidParameterError, LengthMismatchError
from stigpattern.trails import Grid1D, Trail1D, jaccard_batch, trails_of_series_batch
from stigpattern.transforms import ClumpParams, SigmoidParams, clump, sigmoid
from .archetypes import Archetype

logger = logging.getLogger(__name__)

MARK_HEIGHT = 1.0

PARAM_NAMES = (
    "clump_alpha",
    "clump_beta",
    "clump_gamma",
    "clump_lambda",
    "mark_width",
    "evaporation",
    "activation_steepness",
    "activation_threshold",
)


@dataclass(frozen=True)
class SrfParams:
    """The eight tunable parameters of a receptive field."""

    clump: ClumpParams
    mark_width: float
    evaporation: float
    activation: SigmoidParams

    def __post_init__(self):
        if not (math.isfinite(self.mark_width) and self.mark_width > 0):
            raise InvalidParameterError(f"mark width must be finite and > 0, got {self.mark_width}")
        if not (math.isfinite(self.evaporation) and self.evaporation >= 0):
            raise InvalidParameterError(f"evaporation must be finite and >= 0, got {self.evaporation}")

    def to_vector(self) -> np.ndarray:
        c, a = self.clump, self.activation
        return np.array([c.alpha, c.beta, c.gamma, c.lam, self.mark_width, self.evaporation,
                         a.steepness, a.threshold])

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> "SrfParams":
        """Decode a parameter vector in ``PARAM_NAMES`` order; clump thresholds get sorted."""
        v = [float(x) for x in vector]
        if len(v) != len(PARAM_NAMES):
            raise InvalidParameterError(f"expected {len(PARAM_NAMES)} parameters, got {len(v)}")
        return cls(
            clump=ClumpParams.sorted(v[0], v[1], v[2], v[3]),
            mark_width=v[4],
            evaporation=v[5],
            activation=SigmoidParams(v[6], v[7]),
        )

    def to_dict(self) -> Dict[str, float]:
        return dict(zip(PARAM_NAMES, (float(x) for x in self.to_vector())))

    @classmethod
    def from_dict(cls, values: Dict[str, float]) -> "SrfParams":
        missing = [name for name in PARAM_NAMES if name not in values]
        if missing:
            raise InvalidParameterError(f"missing SRF parameters: {missing}")
        return cls.from_vector([values[name] for name in PARAM_NAMES])


def default_srf_params() -> SrfParams:
    """Hand-set parameters that already tell the seven parametric archetypes apart.

    Clumping plateaus sit at 0, 1/2 and 1 (thresholds 0.3 / 0.7), marks are 0.2
    wide, evaporation keeps roughly half a window of history, and the
    activation only lets Jaccard values above 0.8 through.
    """
    return SrfParams(
        clump=ClumpParams(alpha=40.0, beta=0.3, gamma=40.0, lam=0.7),
        mark_width=0.2,
        evaporation=0.3,
        activation=SigmoidParams(steepness=30.0, threshold=0.8),
    )


def window_trails(windows, params: SrfParams, grid: Grid1D) -> np.ndarray:
    """Clump a batch of windows and build their trails."""
    clumped = np.clip(clump(np.atleast_2d(np.asarray(windows, dtype=float)), params.clump), 0.0, 1.0)
    return trails_of_series_batch(clumped, params.mark_width, params.evaporation, MARK_HEIGHT, grid)


class Srf:
    """A receptive field tuned to one archetype.

    The archetype trail is computed at construction; use
    :meth:`with_params` or :func:`rebuild_archetype_trail` to get a field with
    new parameters.
    """

    def __init__(self, params: SrfParams, archetype: Archetype, grid: Grid1D = Grid1D()):
        self.params = params
        self.archetype = archetype
        self.grid = grid
        self.archetype_trail = Trail1D(grid, window_trails(archetype.template, params, grid)[0])

    @property
    def window_length(self) -> int:
        return self.archetype.length

    def with_params(self, params: SrfParams) -> "Srf":
        return Srf(params, self.archetype, self.grid)

    def _check_windows(self, windows) -> np.ndarray:
        windows = np.atleast_2d(np.asarray(windows, dtype=float))
        if windows.shape[1] != self.window_length:
            raise LengthMismatchError(
                f"window has {windows.shape[1]} samples, {self.archetype.name} expects {self.window_length}"
            )
        return windows

    def raw_similarities(self, windows) -> np.ndarray:
        """Jaccard between each window's trail and the archetype trail (before activation)."""
        windows = self._check_windows(windows)
        values = jaccard_batch(window_trails(windows, self.params, self.grid), self.archetype_trail.intensity)
        undefined = np.isnan(values)
        if undefined.any():
            logger.warning("%s: %d window(s) with undefined similarity scored as 0",
                           self.archetype.name, int(undefined.sum()))
            values = np.where(undefined, 0.0, values)
        return values

    def scores(self, windows) -> np.ndarray:
        """Activated similarity of each window in a batch."""
        return np.atleast_1d(sigmoid(self.raw_similarities(windows), self.params.activation))

    def __repr__(self):
        return f"Srf(archetype={self.archetype.name!r}, params={self.params.to_dict()})"


def srf_similarity(srf: Srf, window: Sequence[float]) -> float:
    """Score how much one window resembles the field's archetype, in (0, 1)."""
    window = np.asarray(window, dtype=float)
    if window.ndim != 1:
        raise LengthMismatchError("srf_similarity expects a single 1-D window")
    return float(srf.scores(window)[0])


def rebuild_archetype_trail(srf: Srf, params: SrfParams = None) -> Srf:
    """Return a field whose archetype trail matches ``params`` (default: its own)."""
    return Srf(params or srf.params, srf.archetype, srf.grid)


def with_evaporation(params: SrfParams, delta: float) -> SrfParams:
    return replace(params, evaporation=delta)
