"""Parameter adaptation: differential evolution, fitness, global/local training."""

from .differential_evolution import DeConfig, DeResult, differential_evolution
from .fitness import LabeledWindow, SrfObjective, fitness, squared_error_fitness, stack_dataset
from .phases import (
    EvaporationInterval,
    StaticBounds,
    evaporation_interval,
    evaporation_sweep,
    global_training,
    local_training,
    local_training_run,
    seeded_config,
    sweep_quality,
)
from .synthetic import circular_shift, perturb, synthesize_training_set
from .manifest import read_training_manifest, write_training_manifest

__all__ = [
    "DeConfig",
    "DeResult",
    "differential_evolution",
    "LabeledWindow",
    "SrfObjective",
    "fitness",
    "squared_error_fitness",
    "stack_dataset",
    "EvaporationInterval",
    "StaticBounds",
    "evaporation_interval",
    "evaporation_sweep",
    "global_training",
    "local_training",
    "local_training_run",
    "seeded_config",
    "sweep_quality",
    "circular_shift",
    "perturb",
    "synthesize_training_set",
    "read_training_manifest",
    "write_training_manifest",
]
