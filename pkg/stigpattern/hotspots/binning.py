"""Spatiotemporal binning of positioning events."""

import logging
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, List, Tuple

import numpy as np
import polars as pl

from stigpattern.errors import InvalidParameterError
from stigpattern.trails import Grid2D
from .events import EventSource, events_frame

logger = logging.getLogger(__name__)

MINUTES_PER_DAY = 24 * 60


@dataclass(frozen=True)
class BinConfig:
    """Spatial grid plus the bin duration in minutes."""

    grid: Grid2D
    step_minutes: int = 5

    def __post_init__(self):
        if self.step_minutes < 1 or MINUTES_PER_DAY % self.step_minutes:
            raise InvalidParameterError(f"bin duration must divide a day, got {self.step_minutes} min")

    @property
    def steps_per_day(self) -> int:
        return MINUTES_PER_DAY // self.step_minutes


@dataclass(frozen=True)
class SpatioTemporalBin:
    ix: int
    iy: int
    step: int
    day: date
    value: float


@dataclass(frozen=True)
class BinnedActivity:
    """Occupied bins of an analysis period.

    ``frame`` has one row per occupied bin with columns day, step (index of
    the 5-minute step within the day), ix, iy, value (summed passengers) and
    norm (value min-max normalized over every bin of the period).
    """

    config: BinConfig
    frame: pl.DataFrame = field(compare=False)
    days: Tuple[date, ...]
    dropped_malformed: int = 0
    dropped_out_of_bounds: int = 0

    @property
    def grid(self) -> Grid2D:
        return self.config.grid

    def bins(self) -> List[SpatioTemporalBin]:
        return [
            SpatioTemporalBin(row["ix"], row["iy"], row["step"], row["day"], row["norm"])
            for row in self.frame.iter_rows(named=True)
        ]

    def raw_grid(self) -> np.ndarray:
        """Summed passengers per spatial cell over the whole period."""
        totals = np.zeros(self.grid.shape)
        per_cell = self.frame.group_by(["ix", "iy"]).agg(pl.col("value").sum())
        np.add.at(totals, (per_cell["iy"].to_numpy(), per_cell["ix"].to_numpy()), per_cell["value"].to_numpy())
        return totals


def _bin_chunk(frame: pl.DataFrame, config: BinConfig) -> Tuple[pl.DataFrame, int, int]:
    """Occupied bins of one chunk plus its (malformed, out-of-bounds) drop counts."""
    grid = config.grid
    valid = frame.drop_nulls().filter(
        pl.col("x").is_finite() & pl.col("y").is_finite() & (pl.col("passengers") >= 1)
    )
    inside = valid.filter(
        (pl.col("x") >= grid.x_lo) & (pl.col("x") <= grid.x_hi)
        & (pl.col("y") >= grid.y_lo) & (pl.col("y") <= grid.y_hi)
    )
    ix, iy = grid.cell_index(inside["x"].to_numpy(), inside["y"].to_numpy())
    minutes = pl.col("timestamp").dt.hour().cast(pl.Int64) * 60 + pl.col("timestamp").dt.minute().cast(pl.Int64)
    binned = (
        inside.with_columns(
            pl.Series("ix", ix, dtype=pl.Int64),
            pl.Series("iy", iy, dtype=pl.Int64),
            pl.col("timestamp").dt.date().alias("day"),
            (minutes // config.step_minutes).alias("step"),
        )
        .group_by(["day", "step", "ix", "iy"])
        .agg(pl.col("passengers").sum().cast(pl.Float64).alias("value"))
    )
    return binned, frame.height - valid.height, valid.height - inside.height


def bin_event_chunks(chunks: Iterable[EventSource], config: BinConfig) -> BinnedActivity:
    """Sum passengers per (cell, 5-minute step) chunk by chunk, then normalize.

    Only the occupied bins of the period are held, never the events, so a
    streaming loader can feed arbitrarily large files. Malformed events
    (nulls, non-finite coordinates, passengers < 1) and events outside the
    grid are dropped and counted. The normalization minimum is 0 whenever
    some bin of the period is empty, which is the usual case.
    """
    grid = config.grid
    partial: List[pl.DataFrame] = []
    dropped_malformed = dropped_oob = 0
    for chunk in chunks:
        binned, malformed, oob = _bin_chunk(events_frame(chunk), config)
        dropped_malformed += malformed
        dropped_oob += oob
        if binned.height:
            partial.append(binned)
    if dropped_malformed:
        logger.warning("binning: skipped %d malformed event(s)", dropped_malformed)
    if dropped_oob:
        logger.warning("binning: dropped %d event(s) outside the study area", dropped_oob)

    if partial:
        # a bin can straddle two chunks
        binned = (
            pl.concat(partial, how="vertical")
            .group_by(["day", "step", "ix", "iy"])
            .agg(pl.col("value").sum())
            .sort(["day", "step", "iy", "ix"])
        )
    else:
        binned = pl.DataFrame(schema={"day": pl.Date, "step": pl.Int64, "ix": pl.Int64, "iy": pl.Int64,
                                      "value": pl.Float64})

    days = tuple(sorted(binned["day"].unique().to_list()))
    total_bins = grid.nx * grid.ny * config.steps_per_day * len(days)
    if binned.height:
        hi = float(binned["value"].max())
        lo = 0.0 if binned.height < total_bins else float(binned["value"].min())
        span = hi - lo
        norm = ((pl.col("value") - lo) / span) if span > 0 else pl.lit(0.0)
        binned = binned.with_columns(norm.alias("norm"))
    else:
        binned = binned.with_columns(pl.lit(0.0).alias("norm"))

    logger.info("binned %d occupied bin(s) over %d day(s)", binned.height, len(days))
    return BinnedActivity(config, binned, days, dropped_malformed, dropped_oob)


def bin_events(events: EventSource, config: BinConfig) -> BinnedActivity:
    """Bin an in-memory event collection; see ``bin_event_chunks``."""
    return bin_event_chunks([events_frame(events)], config)
