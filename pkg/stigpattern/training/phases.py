"""Two-phase training of receptive fields.

Global training sweeps the evaporation rate of each field and keeps the
narrowest interval holding the best sweep points; local training then runs DE
over all eight parameters with evaporation confined to that interval.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, Sequence, Tuple

import numpy as np

from stigpattern.errors import InvalidParameterError
from stigpattern.srf import Srf, SrfParams, with_evaporation
from .differential_evolution import DeConfig, DeResult, differential_evolution
from .fitness import LabeledWindow, SrfObjective

logger = logging.getLogger(__name__)

MIN_SWEEP_POINTS = 10
EVAPORATION_PERCENTILE = 90.0


@dataclass(frozen=True)
class EvaporationInterval:
    delta_min: float
    delta_max: float

    def __post_init__(self):
        if not (math.isfinite(self.delta_min) and math.isfinite(self.delta_max)):
            raise InvalidParameterError(f"evaporation interval must be finite: {self}")
        if not 0 <= self.delta_min <= self.delta_max:
            raise InvalidParameterError(f"need 0 <= delta_min <= delta_max, got {self}")

    def contains(self, delta: float) -> bool:
        return self.delta_min <= delta <= self.delta_max

    @property
    def width(self) -> float:
        return self.delta_max - self.delta_min


@dataclass(frozen=True)
class StaticBounds:
    """Search bounds for the parameters other than evaporation."""

    clump_steepness: Tuple[float, float] = (1.0, 100.0)
    clump_threshold: Tuple[float, float] = (0.0, 1.0)
    mark_width: Tuple[float, float] = (0.01, 0.5)
    activation_steepness: Tuple[float, float] = (1.0, 100.0)
    activation_threshold: Tuple[float, float] = (0.0, 1.0)
    evaporation: Tuple[float, float] = (0.01, 1.0)

    def vector(self, interval: EvaporationInterval):
        """Per-dimension bounds in SrfParams vector order."""
        return (
            self.clump_steepness,
            self.clump_threshold,
            self.clump_steepness,
            self.clump_threshold,
            self.mark_width,
            (interval.delta_min, interval.delta_max),
            self.activation_steepness,
            self.activation_threshold,
        )


def evaporation_sweep(lo: float, hi: float, points: int = 50) -> np.ndarray:
    """Log-spaced evaporation values over [lo, hi]."""
    if points < MIN_SWEEP_POINTS:
        raise InvalidParameterError(f"evaporation sweep needs >= {MIN_SWEEP_POINTS} points, got {points}")
    if not 0 <= lo <= hi:
        raise InvalidParameterError(f"malformed evaporation bounds ({lo}, {hi})")
    return np.geomspace(max(lo, 1e-4), max(hi, 1e-4), points)


def evaporation_interval(deltas: Sequence[float], quality: Sequence[float],
                         percentile: float = EVAPORATION_PERCENTILE) -> EvaporationInterval:
    """Narrowest interval holding every sweep point whose quality reaches the percentile.

    Quality is "higher is better" (negated MSE), so the interval brackets the
    best evaporation values of the sweep.
    """
    deltas = np.asarray(deltas, dtype=float)
    quality = np.asarray(quality, dtype=float)
    if deltas.size < MIN_SWEEP_POINTS:
        raise InvalidParameterError(f"evaporation sweep needs >= {MIN_SWEEP_POINTS} points, got {deltas.size}")
    if deltas.shape != quality.shape:
        raise InvalidParameterError("sweep values and qualities differ in length")
    selected = deltas[quality >= np.percentile(quality, percentile)]
    return EvaporationInterval(float(selected.min()), float(selected.max()))


def sweep_quality(srf: Srf, dataset: Sequence[LabeledWindow], deltas: Sequence[float]) -> np.ndarray:
    """Negated fitness of ``srf`` at each evaporation value, other parameters fixed."""
    objective = SrfObjective(srf.archetype, dataset, srf.grid)
    return np.array([-objective(with_evaporation(srf.params, d).to_vector()) for d in deltas])


def global_training(srfs: Sequence[Srf], datasets: Dict[str, Sequence[LabeledWindow]],
                    bounds: StaticBounds = StaticBounds(),
                    sweep_points: int = 50) -> Dict[str, EvaporationInterval]:
    """Evaporation interval for every field of a perceptron.

    Args:
        srfs: the fields to train, with the parameters used during the sweep
        datasets: archetype name -> labeled windows for that field
        bounds: static bounds; ``bounds.evaporation`` is the sweep range
        sweep_points: number of log-spaced evaporation values

    Returns:
        archetype name -> EvaporationInterval
    """
    deltas = evaporation_sweep(*bounds.evaporation, points=sweep_points)
    intervals = {}
    for srf in srfs:
        name = srf.archetype.name
        quality = sweep_quality(srf, datasets[name], deltas)
        intervals[name] = evaporation_interval(deltas, quality)
        logger.info("global training %s: delta in [%.4g, %.4g] (best sweep MSE %.4g)",
                    name, intervals[name].delta_min, intervals[name].delta_max, -quality.max())
    return intervals


def local_training_run(srf: Srf, dataset: Sequence[LabeledWindow], interval: EvaporationInterval,
                       config: DeConfig, bounds: StaticBounds = StaticBounds()) -> Tuple[SrfParams, DeResult]:
    """DE over all eight parameters of one field, evaporation held inside ``interval``.

    The field's current parameters seed the population.

    Returns:
        (best parameters, the DE run)
    """
    objective = SrfObjective(srf.archetype, dataset, srf.grid)
    run_config = config.with_bounds(bounds.vector(interval))
    result = differential_evolution(objective, run_config, initial=srf.params.to_vector())
    params = SrfParams.from_vector(result.x)
    logger.info("local training %s: fitness %.5g", srf.archetype.name, result.fun)
    return params, result


def local_training(srf: Srf, dataset: Sequence[LabeledWindow], interval: EvaporationInterval,
                   config: DeConfig, bounds: StaticBounds = StaticBounds()) -> SrfParams:
    """Trained parameters of one field; see :func:`local_training_run`."""
    return local_training_run(srf, dataset, interval, config, bounds)[0]


def seeded_config(config: DeConfig, offset: int) -> DeConfig:
    """Derive a per-field config whose seed is shifted by ``offset``."""
    return replace(config, rng_seed=config.rng_seed + offset)
