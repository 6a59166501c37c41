"""The seven hotspot-behaviour archetypes, ordered for increasing activity."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from stigpattern.errors import InvalidParameterError

DEFAULT_WINDOW = 72  # 6 h at 5-minute sampling

# name -> (rank, start level, end level); constant shapes have start == end
ARCHETYPE_SHAPES: Dict[str, Tuple[int, float, float]] = {
    "Asleep": (1, 0.1, 0.1),
    "Falling": (2, 0.5, 0.1),
    "Awakening": (3, 0.1, 0.5),
    "Flow": (4, 0.5, 0.5),
    "Chill": (5, 0.9, 0.5),
    "Rise": (6, 0.5, 0.9),
    "RushHour": (7, 0.9, 0.9),
}

ARCHETYPE_NAMES: Tuple[str, ...] = tuple(sorted(ARCHETYPE_SHAPES, key=lambda n: ARCHETYPE_SHAPES[n][0]))


@dataclass(frozen=True)
class Archetype:
    """Ideal activity segment for one hotspot behaviour."""

    name: str
    template: np.ndarray = field(compare=False)
    rank: int

    def __post_init__(self):
        template = np.asarray(self.template, dtype=float)
        if template.ndim != 1 or template.size < 2:
            raise InvalidParameterError(f"archetype {self.name}: template must be 1-D with >= 2 samples")
        if template.min() < 0 or template.max() > 1:
            raise InvalidParameterError(f"archetype {self.name}: template must lie in [0, 1]")
        object.__setattr__(self, "template", template)

    @property
    def length(self) -> int:
        return int(self.template.size)

    def resampled(self, length: int) -> np.ndarray:
        """The template shape stretched or squeezed to ``length`` samples."""
        if length < 1:
            raise InvalidParameterError(f"resample length must be >= 1, got {length}")
        if length == self.length:
            return self.template.copy()
        source = np.linspace(0.0, 1.0, self.length)
        return np.interp(np.linspace(0.0, 1.0, length), source, self.template)


def parametric_template(name: str, length: int = DEFAULT_WINDOW) -> np.ndarray:
    _, start, end = ARCHETYPE_SHAPES[name]
    return np.linspace(start, end, length)


def default_archetypes(length: int = DEFAULT_WINDOW,
                       overrides: Optional[Dict[str, Sequence[float]]] = None) -> List[Archetype]:
    """The seven archetypes in rank order, optionally with loaded templates.

    Args:
        length: window length in samples
        overrides: archetype name -> template replacing the parametric one

    Returns:
        List of Archetype sorted by rank
    """
    overrides = overrides or {}
    unknown = set(overrides) - set(ARCHETYPE_SHAPES)
    if unknown:
        raise InvalidParameterError(f"unknown archetype names: {sorted(unknown)}")
    archetypes = []
    for name in ARCHETYPE_NAMES:
        template = overrides.get(name)
        if template is None:
            template = parametric_template(name, length)
        elif len(template) != length:
            raise InvalidParameterError(
                f"archetype {name}: template has {len(template)} samples, window is {length}"
            )
        archetypes.append(Archetype(name, np.asarray(template, dtype=float), ARCHETYPE_SHAPES[name][0]))
    return archetypes


def archetype_by_name(name: str, archetypes: Sequence[Archetype]) -> Archetype:
    for archetype in archetypes:
        if archetype.name.lower() == name.lower():
            return archetype
    raise InvalidParameterError(f"unknown archetype {name!r}; expected one of {list(ARCHETYPE_NAMES)}")
