"""Positioning events and the planar frame they are binned in."""

import math
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Union

import numpy as np
import polars as pl

from stigpattern.errors import InvalidParameterError
from stigpattern.trails import Grid2D

PICKUP = "pickup"
DROPOFF = "dropoff"
EVENT_KINDS = (PICKUP, DROPOFF)

EARTH_RADIUS_FT = 20_902_231.0

EVENT_SCHEMA = {
    "timestamp": pl.Datetime("us"),
    "x": pl.Float64,
    "y": pl.Float64,
    "passengers": pl.Int64,
    "kind": pl.Utf8,
}


@dataclass(frozen=True)
class PositioningEvent:
    """A pickup or dropoff with its passenger count, in projected feet."""

    timestamp: datetime
    x: float
    y: float
    passengers: int
    kind: str = PICKUP

    def __post_init__(self):
        if self.passengers < 1:
            raise InvalidParameterError(f"passengers must be >= 1, got {self.passengers}")
        if self.kind not in EVENT_KINDS:
            raise InvalidParameterError(f"event kind must be one of {EVENT_KINDS}, got {self.kind!r}")


@dataclass(frozen=True)
class StudyArea:
    """Lon/lat bounding box, projected equirectangularly about its center (feet)."""

    lon_min: float
    lon_max: float
    lat_min: float
    lat_max: float

    def __post_init__(self):
        if not (-180 <= self.lon_min < self.lon_max <= 180):
            raise InvalidParameterError(f"malformed longitude range [{self.lon_min}, {self.lon_max}]")
        if not (-90 <= self.lat_min < self.lat_max <= 90):
            raise InvalidParameterError(f"malformed latitude range [{self.lat_min}, {self.lat_max}]")

    @property
    def center(self):
        return (self.lon_min + self.lon_max) / 2.0, (self.lat_min + self.lat_max) / 2.0

    def project(self, lon, lat):
        lon0, lat0 = self.center
        scale = EARTH_RADIUS_FT * math.pi / 180.0
        x = (np.asarray(lon, dtype=float) - lon0) * scale * math.cos(math.radians(lat0))
        y = (np.asarray(lat, dtype=float) - lat0) * scale
        return x, y

    def unproject(self, x, y):
        lon0, lat0 = self.center
        scale = EARTH_RADIUS_FT * math.pi / 180.0
        lon = np.asarray(x, dtype=float) / (scale * math.cos(math.radians(lat0))) + lon0
        lat = np.asarray(y, dtype=float) / scale + lat0
        return lon, lat

    def grid(self, nx: int, ny: int) -> Grid2D:
        """Spatial grid covering the projected bounding box."""
        x_lo, y_lo = self.project(self.lon_min, self.lat_min)
        x_hi, y_hi = self.project(self.lon_max, self.lat_max)
        return Grid2D(float(x_lo), float(x_hi), float(y_lo), float(y_hi), nx, ny)

    def contains(self, lon, lat):
        lon = np.asarray(lon, dtype=float)
        lat = np.asarray(lat, dtype=float)
        return (lon >= self.lon_min) & (lon <= self.lon_max) & (lat >= self.lat_min) & (lat <= self.lat_max)


EventSource = Union[pl.DataFrame, Iterable[PositioningEvent], Iterable[pl.DataFrame]]


def events_frame(events: EventSource) -> pl.DataFrame:
    """Collect events into one frame with ``EVENT_SCHEMA`` columns.

    Accepts a frame, an iterable of frames (e.g. ingestion chunks) or an
    iterable of PositioningEvent.
    """
    if isinstance(events, pl.DataFrame):
        return events.select([pl.col(name).cast(dtype) for name, dtype in EVENT_SCHEMA.items()])
    items = list(events)
    if not items:
        return pl.DataFrame(schema=EVENT_SCHEMA)
    if isinstance(items[0], pl.DataFrame):
        return pl.concat([events_frame(chunk) for chunk in items], how="vertical")
    return pl.DataFrame(
        {
            "timestamp": [e.timestamp for e in items],
            "x": [float(e.x) for e in items],
            "y": [float(e.y) for e in items],
            "passengers": [int(e.passengers) for e in items],
            "kind": [e.kind for e in items],
        },
        schema=EVENT_SCHEMA,
    )
