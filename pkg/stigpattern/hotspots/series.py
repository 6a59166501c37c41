"""Per-day activity series of a hotspot."""

import logging
from datetime import date
from typing import Dict, Iterable, Optional

import numpy as np
import polars as pl

from stigpattern.series import ActivitySeries
from stigpattern.trails import Grid2D
from stigpattern.transforms import minmax_normalize
from .binning import MINUTES_PER_DAY, BinnedActivity
from .events import EventSource, events_frame
from .extraction import Hotspot

logger = logging.getLogger(__name__)


def hotspot_counts(events: EventSource, hotspot: Hotspot, grid: Grid2D,
                   sampling_minutes: int = 5) -> pl.DataFrame:
    """Passengers per (day, step) for events falling inside the hotspot's cells."""
    frame = events_frame(events).drop_nulls()
    frame = frame.filter(
        (pl.col("x") >= grid.x_lo) & (pl.col("x") <= grid.x_hi)
        & (pl.col("y") >= grid.y_lo) & (pl.col("y") <= grid.y_hi)
    )
    ix, iy = grid.cell_index(frame["x"].to_numpy(), frame["y"].to_numpy())
    inside = hotspot.mask(grid)[iy, ix] if frame.height else np.zeros(0, dtype=bool)
    minutes = pl.col("timestamp").dt.hour().cast(pl.Int64) * 60 + pl.col("timestamp").dt.minute().cast(pl.Int64)
    return (
        frame.filter(pl.Series(inside, dtype=pl.Boolean))
        .with_columns(pl.col("timestamp").dt.date().alias("day"), (minutes // sampling_minutes).alias("step"))
        .group_by(["day", "step"])
        .agg(pl.col("passengers").sum().cast(pl.Float64).alias("value"))
    )


def binned_hotspot_counts(binned: BinnedActivity, hotspot: Hotspot) -> pl.DataFrame:
    """Passengers per (day, step) summed over the occupied bins inside the hotspot."""
    frame = binned.frame
    inside = hotspot.mask(binned.grid)[frame["iy"].to_numpy(), frame["ix"].to_numpy()]
    return (
        frame.filter(pl.Series(inside, dtype=pl.Boolean))
        .group_by(["day", "step"])
        .agg(pl.col("value").sum())
    )


def _series_from_counts(counts: pl.DataFrame, hotspot: Hotspot, days: Iterable[date],
                        sampling_minutes: int) -> Dict[date, ActivitySeries]:
    days = sorted(set(days))
    if not days:
        return {}
    raw = np.zeros((len(days), MINUTES_PER_DAY // sampling_minutes))
    position = {d: i for i, d in enumerate(days)}
    for day, step, value in counts.select(["day", "step", "value"]).iter_rows():
        if day in position:
            raw[position[day], step] = value

    normalized = minmax_normalize(raw.ravel()).reshape(raw.shape)
    empty = ~np.any(raw > 0, axis=1)
    if empty.any():
        logger.warning("hotspot %s: %d day(s) without activity", hotspot.id, int(empty.sum()))
    return {
        d: ActivitySeries(day=d, samples=normalized[i], hotspot=hotspot.id,
                          sampling_minutes=sampling_minutes, empty=bool(empty[i]))
        for i, d in enumerate(days)
    }


def hotspot_series_by_day(events: EventSource, hotspot: Hotspot, grid: Grid2D,
                          days: Optional[Iterable[date]] = None,
                          sampling_minutes: int = 5) -> Dict[date, ActivitySeries]:
    """Normalized activity series of every day of the period.

    Normalization spans the whole period for this hotspot, so differences in
    magnitude between days survive. A day without events inside the hotspot
    yields an all-zero series with ``empty=True``.

    Args:
        events: positioning events (frame, frame chunks or PositioningEvent objects)
        hotspot: the region whose activity is collected
        grid: grid the hotspot cells refer to
        days: days of the period (default: every day present in ``events``)
        sampling_minutes: sampling period

    Returns:
        day -> ActivitySeries, in date order
    """
    frame = events_frame(events)
    counts = hotspot_counts(frame, hotspot, grid, sampling_minutes)
    if days is None:
        days = frame["timestamp"].dt.date().unique().to_list()
    return _series_from_counts(counts, hotspot, days, sampling_minutes)


def hotspot_series_from_bins(binned: BinnedActivity, hotspot: Hotspot,
                             days: Optional[Iterable[date]] = None) -> Dict[date, ActivitySeries]:
    """Same series as ``hotspot_series_by_day``, read from already binned activity.

    The sampling period is the bin duration and the default period is every
    day with at least one occupied bin.
    """
    counts = binned_hotspot_counts(binned, hotspot)
    return _series_from_counts(counts, hotspot, binned.days if days is None else days,
                               binned.config.step_minutes)


def hotspot_series(events: EventSource, hotspot: Hotspot, grid: Grid2D, day: date,
                   sampling_minutes: int = 5) -> ActivitySeries:
    """Activity series of one day, normalized over every day present in ``events``."""
    frame = events_frame(events)
    days = set(frame["timestamp"].dt.date().unique().to_list()) | {day}
    return hotspot_series_by_day(frame, hotspot, grid, days, sampling_minutes)[day]
