"""Differential Evolution (rand/1/bin) for bounded black-box minimization."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from stigpattern.errors import InvalidParameterError

logger = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class DeConfig:
    """Hyperparameters of a DE run.

    Attributes:
        population: individuals per generation (>= 4)
        differential_weight: mutation factor F in (0, 2]
        crossover: binomial crossover rate CR in [0, 1]
        generations: number of generations after the initial population
        bounds: one (lo, hi) pair per dimension
        rng_seed: seed of the run's random stream
        workers: threads used to evaluate a generation (1 = sequential)
    """

    bounds: Tuple[Tuple[float, float], ...]
    population: int = 20
    differential_weight: float = 0.5
    crossover: float = 0.9
    generations: int = 100
    rng_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "bounds", tuple((float(lo), float(hi)) for lo, hi in self.bounds))
        if not self.bounds:
            raise InvalidParameterError("DE needs at least one dimension")
        for lo, hi in self.bounds:
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
                raise InvalidParameterError(f"malformed DE bounds ({lo}, {hi})")
        if self.population < 4:
            raise InvalidParameterError(f"DE population must be >= 4, got {self.population}")
        if not 0 < self.differential_weight <= 2:
            raise InvalidParameterError(f"differential weight must be in (0, 2], got {self.differential_weight}")
        if not 0 <= self.crossover <= 1:
            raise InvalidParameterError(f"crossover rate must be in [0, 1], got {self.crossover}")
        if self.generations < 0:
            raise InvalidParameterError(f"generations must be >= 0, got {self.generations}")
        if self.workers < 1:
            raise InvalidParameterError(f"workers must be >= 1, got {self.workers}")

    def with_bounds(self, bounds: Sequence[Tuple[float, float]]) -> "DeConfig":
        return DeConfig(tuple(bounds), self.population, self.differential_weight, self.crossover,
                        self.generations, self.rng_seed, self.workers)

    def to_dict(self) -> dict:
        return {
            "population": self.population,
            "differential_weight": self.differential_weight,
            "crossover": self.crossover,
            "generations": self.generations,
            "rng_seed": self.rng_seed,
            "bounds": [list(b) for b in self.bounds],
        }


@dataclass
class DeResult:
    x: np.ndarray
    fun: float
    history: List[float] = field(default_factory=list)
    evaluations: int = 0


def _evaluate(objective: Objective, candidates: np.ndarray, workers: int) -> np.ndarray:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return np.fromiter(pool.map(objective, candidates), dtype=float, count=len(candidates))
    return np.array([objective(c) for c in candidates], dtype=float)


def differential_evolution(objective: Objective, config: DeConfig,
                           initial: Optional[Sequence[float]] = None) -> DeResult:
    """Minimize ``objective`` inside ``config.bounds``.

    Trial vectors of a whole generation are built first, evaluated (possibly
    in parallel), and then compete one-to-one with their parents. Mutants that
    leave the box are clipped back onto it.

    Args:
        objective: function of a parameter vector returning a float
        config: DE hyperparameters
        initial: optional starting individual, replacing the first random one

    Returns:
        DeResult with the best vector, its fitness and the best fitness after
        each generation (entry 0 is the initial population).
    """
    rng = np.random.default_rng(config.rng_seed)
    lo = np.array([b[0] for b in config.bounds])
    hi = np.array([b[1] for b in config.bounds])
    size, dim = config.population, lo.size

    population = lo + rng.random((size, dim)) * (hi - lo)
    if initial is not None:
        initial = np.asarray(initial, dtype=float)
        if initial.shape != (dim,):
            raise InvalidParameterError(f"initial vector has shape {initial.shape}, expected ({dim},)")
        population[0] = np.clip(initial, lo, hi)

    fitness = _evaluate(objective, population, config.workers)
    evaluations = size
    best = int(np.argmin(fitness))
    history = [float(fitness[best])]

    indices = np.arange(size)
    for generation in range(config.generations):
        trials = np.empty_like(population)
        for i in range(size):
            r1, r2, r3 = rng.choice(indices[indices != i], size=3, replace=False)
            mutant = population[r1] + config.differential_weight * (population[r2] - population[r3])
            mutant = np.clip(mutant, lo, hi)
            cross = rng.random(dim) < config.crossover
            cross[rng.integers(dim)] = True
            trials[i] = np.where(cross, mutant, population[i])

        trial_fitness = _evaluate(objective, trials, config.workers)
        evaluations += size
        improved = trial_fitness <= fitness
        population[improved] = trials[improved]
        fitness[improved] = trial_fitness[improved]

        best = int(np.argmin(fitness))
        history.append(float(fitness[best]))
        logger.debug("DE generation %d: best fitness %.6g", generation + 1, history[-1])

    logger.info("DE finished after %d evaluations, best fitness %.6g", evaluations, history[-1])
    return DeResult(x=population[best].copy(), fun=float(fitness[best]), history=history,
                    evaluations=evaluations)
