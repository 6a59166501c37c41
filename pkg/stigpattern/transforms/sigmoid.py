"""Pointwise signal conditioning: sigmoid, double-sigmoid clumping, min-max scaling."""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import expit
from sklearn.preprocessing import minmax_scale

from stigpattern.errors import InvalidParameterError


@dataclass(frozen=True)
class SigmoidParams:
    """Steepness and threshold of ``1 / (1 + exp(-steepness * (x - threshold)))``."""

    steepness: float
    threshold: float

    def __post_init__(self):
        if not (math.isfinite(self.steepness) and math.isfinite(self.threshold)):
            raise InvalidParameterError(f"sigmoid parameters must be finite: {self}")


@dataclass(frozen=True)
class ClumpParams:
    """Two steepness/threshold pairs of the clumping double sigmoid.

    ``alpha``/``beta`` drive the lower sigmoid and ``gamma``/``lam`` the upper
    one; ``beta <= lam`` always holds.
    """

    alpha: float
    beta: float
    gamma: float
    lam: float

    def __post_init__(self):
        values = (self.alpha, self.beta, self.gamma, self.lam)
        if not all(math.isfinite(v) for v in values):
            raise InvalidParameterError(f"clump parameters must be finite: {self}")
        if self.alpha <= 0 or self.gamma <= 0:
            raise InvalidParameterError(f"clump steepnesses must be > 0: {self}")
        if self.beta > self.lam:
            raise InvalidParameterError(f"clump thresholds need beta <= lam: {self}")

    @classmethod
    def sorted(cls, alpha: float, beta: float, gamma: float, lam: float) -> "ClumpParams":
        """Build from unordered thresholds, swapping them when beta > lam."""
        low, high = sorted((beta, lam))
        return cls(alpha, low, gamma, high)

    @property
    def lower(self) -> SigmoidParams:
        return SigmoidParams(self.alpha, self.beta)

    @property
    def upper(self) -> SigmoidParams:
        return SigmoidParams(self.gamma, self.lam)


def sigmoid(x, params: SigmoidParams):
    """Logistic activation; works on scalars and arrays and saturates instead of overflowing."""
    value = expit(params.steepness * (np.asarray(x, dtype=float) - params.threshold))
    return float(value) if np.ndim(value) == 0 else value


def clump(x, params: ClumpParams):
    """Soft discretization: mean of two sigmoids, giving plateaus near 0, 1/2 and 1."""
    x = np.asarray(x, dtype=float)
    value = 0.5 * (expit(params.alpha * (x - params.beta)) + expit(params.gamma * (x - params.lam)))
    return float(value) if np.ndim(value) == 0 else value


def smooth(series: Sequence[float], params: SigmoidParams) -> np.ndarray:
    """Apply the smoothing sigmoid to every sample."""
    return np.atleast_1d(sigmoid(np.asarray(series, dtype=float), params))


def minmax_normalize(series: Sequence[float]) -> np.ndarray:
    """Rescale to [0, 1]; a constant series maps to all zeros."""
    series = np.asarray(series, dtype=float)
    if series.size == 0:
        raise InvalidParameterError("cannot normalize an empty series")
    if not np.all(np.isfinite(series)):
        raise InvalidParameterError("cannot normalize a series with non-finite values")
    return minmax_scale(series.ravel()).reshape(series.shape)
