"""Training of the whole perceptron and its archetype-detection error."""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from sklearn.metrics import mean_squared_error

from stigpattern.errors import InvalidParameterError
from stigpattern.srf import Archetype, Srf, SrfParams, default_archetypes, default_srf_params
from stigpattern.trails import Grid1D
from stigpattern.training import (
    DeConfig,
    LabeledWindow,
    StaticBounds,
    global_training,
    local_training_run,
    seeded_config,
    synthesize_training_set,
    write_training_manifest,
)
from .perceptron import StigmergicPerceptron

logger = logging.getLogger(__name__)

TOTAL_KEY = "TOT"


def build_training_sets(archetypes: Sequence[Archetype], n: int, noise_amp: float, max_shift: int,
                        seed: int) -> Dict[str, List[LabeledWindow]]:
    """One labeled set per archetype, each drawn from its own seed offset."""
    return {
        a.name: synthesize_training_set(a, n, noise_amp, max_shift, seed + i, archetypes)
        for i, a in enumerate(archetypes)
    }


def train_perceptron(archetypes: Optional[Sequence[Archetype]] = None,
                     datasets: Optional[Dict[str, Sequence[LabeledWindow]]] = None,
                     config: Optional[DeConfig] = None,
                     bounds: StaticBounds = StaticBounds(),
                     sweep_points: int = 50,
                     initial: Optional[SrfParams] = None,
                     window_hop: Optional[int] = None,
                     n: int = 20, noise_amp: float = 0.05, max_shift: int = 6, seed: int = 0,
                     manifest_dir: Optional[Union[str, Path]] = None,
                     grid: Grid1D = Grid1D()) -> StigmergicPerceptron:
    """Global then local training of every receptive field.

    Args:
        archetypes: the archetype bank (default: the parametric seven)
        datasets: archetype name -> labeled windows; synthesized when omitted
        config: DE hyperparameters; bounds are replaced per field
        bounds: static search bounds, ``bounds.evaporation`` is the sweep range
        sweep_points: points of the evaporation sweep
        initial: starting parameters of every field (default: hand-set ones)
        window_hop: hop of the resulting perceptron
        n, noise_amp, max_shift, seed: synthesis settings when ``datasets`` is None
        manifest_dir: when set, one TOML manifest per field is written there
        grid: value-axis grid

    Returns:
        The trained StigmergicPerceptron
    """
    archetypes = list(archetypes) if archetypes is not None else default_archetypes()
    if datasets is None:
        datasets = build_training_sets(archetypes, n, noise_amp, max_shift, seed)
    missing = [a.name for a in archetypes if a.name not in datasets]
    if missing:
        raise InvalidParameterError(f"no training data for archetypes {missing}")
    config = config or DeConfig(bounds=((0.0, 1.0),), rng_seed=seed)
    start = initial or default_srf_params()

    srfs = [Srf(start, a, grid) for a in archetypes]
    logger.info("training %d receptive fields", len(srfs))
    intervals = global_training(srfs, datasets, bounds, sweep_points)

    trained = []
    for i, srf in enumerate(srfs):
        name = srf.archetype.name
        field_config = seeded_config(config, i)
        params, result = local_training_run(srf, datasets[name], intervals[name], field_config, bounds)
        trained.append(srf.with_params(params))
        if manifest_dir is not None:
            interval = intervals[name]
            write_training_manifest(
                Path(manifest_dir) / f"srf_{name}.toml", name, field_config.rng_seed, field_config, params,
                result.fun, extra={"delta_min": interval.delta_min, "delta_max": interval.delta_max,
                                   "evaluations": result.evaluations},
            )
    return StigmergicPerceptron(trained, window_hop)


def perceptron_detection_mse(sp: StigmergicPerceptron,
                             windows_by_archetype: Dict[str, Sequence]) -> Dict[str, float]:
    """Per-archetype MSE between the activity level of a window and its archetype rank.

    Each window is scored on its own. ``TOT`` holds the sum over archetypes.
    """
    ranks = {srf.archetype.name: srf.archetype.rank for srf in sp.srfs}
    errors = {}
    for name, windows in windows_by_archetype.items():
        if name not in ranks:
            raise InvalidParameterError(f"perceptron has no field for archetype {name!r}")
        rows = np.vstack([w.window if isinstance(w, LabeledWindow) else np.asarray(w, dtype=float)
                          for w in windows])
        levels = sp.levels(rows)
        errors[name] = float(mean_squared_error(np.full(levels.size, float(ranks[name])), levels))
        logger.debug("detection MSE %s: %.4f", name, errors[name])
    errors[TOTAL_KEY] = float(sum(errors.values()))
    return errors
