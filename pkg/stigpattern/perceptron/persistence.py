"""TOML persistence of trained perceptron and day-similarity parameters."""

from pathlib import Path
from typing import Optional, Sequence, Union

import tomli
import tomli_w

from stigpattern.errors import InvalidConfigError
from stigpattern.srf import Archetype, SrfParams, archetype_by_name, default_archetypes
from .day_similarity import DaySimilarityParams, DaySimilaritySrf
from .perceptron import StigmergicPerceptron


def save_perceptron(sp: StigmergicPerceptron, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    record = {
        "window": sp.window,
        "window_hop": sp.window_hop,
        "fields": [
            {"archetype": srf.archetype.name, "rank": srf.archetype.rank, **srf.params.to_dict()}
            for srf in sp.srfs
        ],
    }
    path.write_text(tomli_w.dumps(record))
    return path


def load_perceptron(path: Union[str, Path],
                    archetypes: Optional[Sequence[Archetype]] = None) -> StigmergicPerceptron:
    """Rebuild a perceptron; archetype templates come from ``archetypes`` (default: parametric)."""
    path = Path(path)
    try:
        record = tomli.loads(path.read_text())
    except (OSError, tomli.TOMLDecodeError) as exc:
        raise InvalidConfigError(f"cannot read perceptron parameters from {path}: {exc}") from exc
    fields = record.get("fields", [])
    if not fields:
        raise InvalidConfigError(f"{path} holds no receptive fields")
    bank = list(archetypes) if archetypes is not None else default_archetypes(int(record.get("window", 72)))
    params = [SrfParams.from_dict(f) for f in fields]
    chosen = [archetype_by_name(f["archetype"], bank) for f in fields]
    return StigmergicPerceptron.from_params(params, chosen, record.get("window_hop"))


def save_day_similarity(dsrf: DaySimilaritySrf, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(tomli_w.dumps({"n_levels": dsrf.n_levels, "params": dsrf.params.to_dict()}))
    return path


def load_day_similarity(path: Union[str, Path]) -> DaySimilaritySrf:
    path = Path(path)
    try:
        record = tomli.loads(path.read_text())
        params = DaySimilarityParams.from_dict(record["params"])
    except (OSError, KeyError, tomli.TOMLDecodeError) as exc:
        raise InvalidConfigError(f"cannot read day-similarity parameters from {path}: {exc}") from exc
    return DaySimilaritySrf(params, int(record.get("n_levels", 7)))
