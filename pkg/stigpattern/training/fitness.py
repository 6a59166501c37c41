"""Mean-squared-error fitness of receptive-field parameters over labeled windows."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sklearn.metrics import mean_squared_error

from stigpattern.errors import InvalidParameterError, LengthMismatchError
from stigpattern.srf import Archetype, Srf, SrfParams
from stigpattern.trails import Grid1D


@dataclass(frozen=True)
class LabeledWindow:
    """A sample window with target similarity 1 (shows the archetype) or 0."""

    window: np.ndarray
    target: float

    def __post_init__(self):
        object.__setattr__(self, "window", np.asarray(self.window, dtype=float))
        if self.target not in (0.0, 1.0):
            raise InvalidParameterError(f"target similarity must be 0 or 1, got {self.target}")


def squared_error_fitness(computed: Sequence[float], targets: Sequence[float]) -> float:
    """Average of ``|S_i - S_hat_i|^2`` over the M labeled items."""
    computed = np.asarray(computed, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if computed.size == 0:
        raise InvalidParameterError("fitness needs a non-empty dataset")
    if computed.shape != targets.shape:
        raise LengthMismatchError(f"{computed.size} similarities for {targets.size} targets")
    return float(mean_squared_error(targets, computed))


def stack_dataset(dataset: Sequence[LabeledWindow]):
    if not dataset:
        raise InvalidParameterError("fitness needs a non-empty dataset")
    lengths = {item.window.size for item in dataset}
    if len(lengths) != 1:
        raise LengthMismatchError(f"labeled windows have mixed lengths {sorted(lengths)}")
    windows = np.vstack([item.window for item in dataset])
    targets = np.array([item.target for item in dataset])
    return windows, targets


def fitness(params: SrfParams, archetype: Archetype, dataset: Sequence[LabeledWindow],
            grid: Grid1D = Grid1D()) -> float:
    """MSE between the field's similarities and the dataset's targets."""
    windows, targets = stack_dataset(dataset)
    return squared_error_fitness(Srf(params, archetype, grid).scores(windows), targets)


class SrfObjective:
    """DE objective over parameter vectors, with the dataset stacked once."""

    def __init__(self, archetype: Archetype, dataset: Sequence[LabeledWindow], grid: Grid1D = Grid1D()):
        self.archetype = archetype
        self.grid = grid
        self.windows, self.targets = stack_dataset(dataset)

    def __call__(self, vector) -> float:
        params = SrfParams.from_vector(vector)
        return squared_error_fitness(Srf(params, self.archetype, self.grid).scores(self.windows), self.targets)
