"""Pheromone mark shapes: trapezoid (value axis) and truncated cone (space)."""

import math
from dataclasses import dataclass

import numpy as np

from stigpattern.errors import InvalidMarkError


def trapezoid_profile(distance, width: float, height):
    """Evaluate a trapezoid of base ``width`` and top ``width / 2``.

    ``distance`` is the absolute offset from the mark center; ``height`` may be
    a scalar or an array broadcastable against ``distance``.
    """
    ramp = (width / 2.0 - np.abs(distance)) / (width / 4.0)
    return height * np.clip(ramp, 0.0, 1.0)


def cone_profile(radius_from_center, base_radius: float, height):
    """Evaluate a truncated cone whose top radius is half the base radius."""
    ramp = (base_radius - radius_from_center) / (base_radius / 2.0)
    return height * np.clip(ramp, 0.0, 1.0)


def _require_finite_positive(name: str, value: float):
    if not math.isfinite(value) or value <= 0:
        raise InvalidMarkError(f"{name} must be finite and > 0, got {value}")


@dataclass(frozen=True)
class Mark1D:
    """Trapezoid mark released on the value axis."""

    center: float
    width: float
    height: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.center):
            raise InvalidMarkError(f"mark center must be finite, got {self.center}")
        _require_finite_positive("mark width", self.width)
        _require_finite_positive("mark height", self.height)

    @property
    def support(self):
        return (self.center - self.width / 2.0, self.center + self.width / 2.0)

    def evaluate(self, positions) -> np.ndarray:
        return trapezoid_profile(np.asarray(positions, dtype=float) - self.center, self.width, self.height)


@dataclass(frozen=True)
class Mark2D:
    """Truncated-cone mark released on the spatial grid."""

    x: float
    y: float
    radius: float
    height: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidMarkError(f"mark center must be finite, got ({self.x}, {self.y})")
        _require_finite_positive("mark radius", self.radius)
        _require_finite_positive("mark height", self.height)

    def evaluate(self, xs, ys) -> np.ndarray:
        """Evaluate on a mesh: ``xs`` varies along columns, ``ys`` along rows."""
        dx = np.asarray(xs, dtype=float)[np.newaxis, :] - self.x
        dy = np.asarray(ys, dtype=float)[:, np.newaxis] - self.y
        return cone_profile(np.hypot(dx, dy), self.radius, self.height)
