"""Stigmergic Receptive Fields and the archetypes they respond to."""

from .archetypes import (
    ARCHETYPE_NAMES,
    ARCHETYPE_SHAPES,
    DEFAULT_WINDOW,
    Archetype,
    archetype_by_name,
    default_archetypes,
    parametric_template,
)
from .receptive_field import (
    MARK_HEIGHT,
    PARAM_NAMES,
    Srf,
    SrfParams,
    default_srf_params,
    rebuild_archetype_trail,
    srf_similarity,
    window_trails,
    with_evaporation,
)

__all__ = [
    "ARCHETYPE_NAMES",
    "ARCHETYPE_SHAPES",
    "DEFAULT_WINDOW",
    "Archetype",
    "archetype_by_name",
    "default_archetypes",
    "parametric_template",
    "MARK_HEIGHT",
    "PARAM_NAMES",
    "Srf",
    "SrfParams",
    "default_srf_params",
    "rebuild_archetype_trail",
    "srf_similarity",
    "window_trails",
    "with_evaporation",
]
