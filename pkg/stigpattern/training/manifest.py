"""Reproducibility records for training runs."""

from pathlib import Path
from typing import Dict, Optional, Union

import tomli
import tomli_w

from stigpattern.srf import SrfParams
from .differential_evolution import DeConfig


def write_training_manifest(path: Union[str, Path], archetype: str, seed: int, config: DeConfig,
                            params: SrfParams, fitness: float,
                            extra: Optional[Dict[str, object]] = None) -> Path:
    """Write seed, DE config, resulting parameters and final fitness as TOML."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    record = {
        "archetype": archetype,
        "seed": int(seed),
        "final_fitness": float(fitness),
        "config": config.to_dict(),
        "params": params.to_dict(),
    }
    if extra:
        record["extra"] = dict(extra)
    path.write_text(tomli_w.dumps(record))
    return path


def read_training_manifest(path: Union[str, Path]) -> dict:
    return tomli.loads(Path(path).read_text())
