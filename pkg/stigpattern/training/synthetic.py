"""Labeled training windows grown from pure archetype templates."""

import math
from typing import List, Optional, Sequence

import numpy as np

from stigpattern.errors import InvalidParameterError
from stigpattern.srf import Archetype, default_archetypes
from .fitness import LabeledWindow


def circular_shift(window: Sequence[float], shift: int) -> np.ndarray:
    """Rotate samples right by ``shift`` (left when negative)."""
    return np.roll(np.asarray(window, dtype=float), shift)


def perturb(template: np.ndarray, noise_amp: float, max_shift: int, rng: np.random.Generator) -> np.ndarray:
    """Template plus uniform noise in [-noise_amp, noise_amp], clamped to [0, 1], then circularly shifted."""
    noisy = np.clip(template + rng.uniform(-noise_amp, noise_amp, size=template.size), 0.0, 1.0)
    return circular_shift(noisy, int(rng.integers(-max_shift, max_shift + 1)))


def synthesize_training_set(archetype: Archetype, n: int, noise_amp: float, max_shift: int,
                            rng_seed: int, archetypes: Optional[Sequence[Archetype]] = None) -> List[LabeledWindow]:
    """Build ``n`` positive and ``n`` negative windows for one archetype.

    Negatives cycle through the other archetypes so each is represented about
    equally.

    Args:
        archetype: the archetype the positives show (target 1)
        n: positives (and negatives) to draw
        noise_amp: amplitude of the additive uniform noise
        max_shift: largest circular shift in samples, either direction
        rng_seed: seed of the generator
        archetypes: the full archetype bank (default: the parametric seven)

    Returns:
        List of 2n LabeledWindow, positives first
    """
    length = archetype.length
    if n < 1:
        raise InvalidParameterError(f"need n >= 1 windows, got {n}")
    if not (math.isfinite(noise_amp) and noise_amp >= 0):
        raise InvalidParameterError(f"noise amplitude must be finite and >= 0, got {noise_amp}")
    if not 0 <= max_shift < length:
        raise InvalidParameterError(f"max shift must be in [0, {length}), got {max_shift}")

    archetypes = archetypes if archetypes is not None else default_archetypes(length)
    others = [a for a in archetypes if a.name != archetype.name]
    if not others:
        raise InvalidParameterError("negatives need at least one other archetype")

    rng = np.random.default_rng(rng_seed)
    positives = [LabeledWindow(perturb(archetype.template, noise_amp, max_shift, rng), 1.0) for _ in range(n)]
    negatives = [LabeledWindow(perturb(others[i % len(others)].template, noise_amp, max_shift, rng), 0.0)
                 for i in range(n)]
    return positives + negatives
