"""Streaming loader for TLC-style taxi trip CSV files."""

import csv
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Tuple, Union

import polars as pl

from stigpattern.errors import IngestError
from stigpattern.hotspots import (
    DROPOFF,
    EVENT_SCHEMA,
    PICKUP,
    BinConfig,
    BinnedActivity,
    StudyArea,
    bin_event_chunks,
    events_frame,
)
from .base import BaseLoader

logger = logging.getLogger(__name__)

TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S"

# canonical column -> accepted header names (TLC yellow/green exports use prefixes)
COLUMN_ALIASES: Dict[str, Tuple[str, ...]] = {
    "pickup_datetime": ("pickup_datetime", "tpep_pickup_datetime", "lpep_pickup_datetime"),
    "dropoff_datetime": ("dropoff_datetime", "tpep_dropoff_datetime", "lpep_dropoff_datetime"),
    "pickup_longitude": ("pickup_longitude",),
    "pickup_latitude": ("pickup_latitude",),
    "dropoff_longitude": ("dropoff_longitude",),
    "dropoff_latitude": ("dropoff_latitude",),
    "passenger_count": ("passenger_count",),
}


@dataclass
class IngestStats:
    rows_total: int = 0
    rows_dropped: int = 0
    events_emitted: int = 0
    seconds: float = 0.0

    @property
    def rows_per_second(self) -> float:
        return self.rows_total / self.seconds if self.seconds > 0 else float("inf")

    def add(self, other: "IngestStats"):
        self.rows_total += other.rows_total
        self.rows_dropped += other.rows_dropped
        self.events_emitted += other.events_emitted
        self.seconds += other.seconds


def resolve_header(header: List[str], path: str) -> Dict[str, int]:
    """Column index of every canonical TLC field."""
    normalized = [h.strip().lower() for h in header]
    positions = {}
    for canonical, aliases in COLUMN_ALIASES.items():
        found = next((normalized.index(a) for a in aliases if a in normalized), None)
        if found is None:
            raise IngestError(f"unknown header: missing column {canonical!r}", path=path, row=1)
        positions[canonical] = found
    return positions


class TLCLoader(BaseLoader):
    """Read trip rows in bounded chunks and turn each valid row into two events."""

    def __init__(self, area: StudyArea, chunk_rows: int = 100_000):
        """
        Initialize the loader.

        Args:
            area: study area whose projection turns lon/lat into planar feet
            chunk_rows: rows parsed per chunk
        """
        if chunk_rows < 1:
            raise ValueError(f"chunk_rows must be >= 1, got {chunk_rows}")
        self.area = area
        self.chunk_rows = chunk_rows
        self.stats = IngestStats()

    def _chunk_events(self, rows: List[List[str]], positions: Dict[str, int]) -> pl.DataFrame:
        width = max(positions.values()) + 1
        complete = [r for r in rows if len(r) >= width]
        columns = {name: [r[idx] for r in complete] for name, idx in positions.items()}
        raw = pl.DataFrame(columns, schema={name: pl.Utf8 for name in positions})
        parsed = raw.select(
            pl.col("pickup_datetime").str.strip_chars().str.strptime(pl.Datetime("us"), TIMESTAMP_FORMAT, strict=False),
            pl.col("dropoff_datetime").str.strip_chars().str.strptime(pl.Datetime("us"), TIMESTAMP_FORMAT, strict=False),
            *[pl.col(c).str.strip_chars().cast(pl.Float64, strict=False)
              for c in ("pickup_longitude", "pickup_latitude", "dropoff_longitude", "dropoff_latitude",
                        "passenger_count")],
        )
        coords = ("pickup_longitude", "pickup_latitude", "dropoff_longitude", "dropoff_latitude")
        valid = parsed.drop_nulls().filter(
            pl.all_horizontal([pl.col(c).is_finite() for c in coords])
            & (pl.col("passenger_count") >= 1)
            & (pl.col("passenger_count") == pl.col("passenger_count").floor())
        )
        self.stats.rows_dropped += len(rows) - valid.height

        px, py = self.area.project(valid["pickup_longitude"].to_numpy(), valid["pickup_latitude"].to_numpy())
        dx, dy = self.area.project(valid["dropoff_longitude"].to_numpy(), valid["dropoff_latitude"].to_numpy())
        passengers = valid["passenger_count"].cast(pl.Int64)
        pickups = pl.DataFrame({"timestamp": valid["pickup_datetime"], "x": px, "y": py,
                                "passengers": passengers, "kind": [PICKUP] * valid.height}, schema=EVENT_SCHEMA)
        dropoffs = pl.DataFrame({"timestamp": valid["dropoff_datetime"], "x": dx, "y": dy,
                                 "passengers": passengers, "kind": [DROPOFF] * valid.height}, schema=EVENT_SCHEMA)
        events = pl.concat([pickups, dropoffs], how="vertical")
        self.stats.events_emitted += events.height
        return events

    def load(self, filepath: Union[str, Path]) -> Iterator[pl.DataFrame]:
        """
        Stream event chunks from a trip CSV.

        Args:
            filepath: Path to the CSV file

        Returns:
            Iterator of event frames (``EVENT_SCHEMA`` columns); ``self.stats``
            is complete once the iterator is exhausted
        """
        path = self._require_file(filepath)
        self.stats = IngestStats()
        started = time.perf_counter()
        try:
            with open(path, "r", encoding="utf-8", newline="") as f:
                reader = csv.reader(f)
                header = next(reader, None)
                if header is None:
                    raise IngestError("CSV file is empty", path=str(path), row=1)
                positions = resolve_header(header, str(path))
                chunk: List[List[str]] = []
                for row in reader:
                    if not row:
                        continue
                    chunk.append(row)
                    if len(chunk) >= self.chunk_rows:
                        self.stats.rows_total += len(chunk)
                        yield self._chunk_events(chunk, positions)
                        chunk = []
                if chunk:
                    self.stats.rows_total += len(chunk)
                    yield self._chunk_events(chunk, positions)
        except (OSError, UnicodeDecodeError, csv.Error) as e:
            raise IngestError(f"cannot read trip file: {e}", path=str(path),
                              row=self.stats.rows_total + 2) from e
        finally:
            self.stats.seconds = time.perf_counter() - started

        if self.stats.rows_dropped:
            logger.warning("%s: dropped %d of %d row(s) with missing or invalid fields",
                           path.name, self.stats.rows_dropped, self.stats.rows_total)
        logger.info("%s: %d row(s) -> %d event(s) at %.0f rows/s", path.name, self.stats.rows_total,
                    self.stats.events_emitted, self.stats.rows_per_second)


def ingest_csv(path: Union[str, Path], area: StudyArea,
               chunk_rows: int = 100_000) -> Tuple[pl.DataFrame, IngestStats]:
    """Read a whole trip file into one event frame plus its ingestion statistics."""
    loader = TLCLoader(area, chunk_rows)
    chunks = list(loader.load(path))
    return events_frame(chunks), loader.stats


def ingest_many(paths: List[Union[str, Path]], area: StudyArea,
                chunk_rows: int = 100_000) -> Tuple[pl.DataFrame, IngestStats]:
    """Pool the events of several files (e.g. separate months) into one frame."""
    frames, total = [], IngestStats()
    for path in paths:
        frame, stats = ingest_csv(path, area, chunk_rows)
        frames.append(frame)
        total.add(stats)
    return events_frame(frames), total



def bin_csv(paths: Union[str, Path, List[Union[str, Path]]], config: BinConfig, area: StudyArea,
            chunk_rows: int = 100_000) -> Tuple[BinnedActivity, IngestStats]:
    """
    Stream one or more trip files straight into spatiotemporal bins.

    Each chunk is binned and released before the next one is read, so memory
    follows the number of occupied bins rather than the number of trips.

    Args:
        paths: trip CSV file, or several files pooled into one period
        config: spatial grid and bin duration
        area: study area whose projection turns lon/lat into planar feet
        chunk_rows: rows parsed per chunk

    Returns:
        (binned activity, ingestion statistics summed over the files)
    """
    if isinstance(paths, (str, Path)):
        paths = [paths]
    total = IngestStats()

    def chunks() -> Iterator[pl.DataFrame]:
        for path in paths:
            loader = TLCLoader(area, chunk_rows)
            yield from loader.load(path)
            total.add(loader.stats)

    return bin_event_chunks(chunks(), config), total
