"""Hotspot discovery from positioning events."""

from .events import (
    DROPOFF,
    EVENT_KINDS,
    EVENT_SCHEMA,
    PICKUP,
    PositioningEvent,
    StudyArea,
    events_frame,
)
from .binning import BinConfig, BinnedActivity, SpatioTemporalBin, bin_event_chunks, bin_events
from .slots import TimeSlot, slot_steps, slot_trail, slot_trails
from .extraction import Hotspot, extract_hotspots, hotspot_label, relevant_cells
from .series import (
    binned_hotspot_counts,
    hotspot_counts,
    hotspot_series,
    hotspot_series_by_day,
    hotspot_series_from_bins,
)

__all__ = [
    "DROPOFF",
    "EVENT_KINDS",
    "EVENT_SCHEMA",
    "PICKUP",
    "PositioningEvent",
    "StudyArea",
    "events_frame",
    "BinConfig",
    "BinnedActivity",
    "SpatioTemporalBin",
    "bin_event_chunks",
    "bin_events",
    "TimeSlot",
    "slot_steps",
    "slot_trail",
    "slot_trails",
    "Hotspot",
    "extract_hotspots",
    "hotspot_label",
    "relevant_cells",
    "binned_hotspot_counts",
    "hotspot_counts",
    "hotspot_series",
    "hotspot_series_by_day",
    "hotspot_series_from_bins",
]
