"""Desk-scale synthetic trip data with known hotspots, day classes and anomalies.

Each scheduled hotspot emits short trips whose per-step count follows the
archetype schedule of the day's behavioural class. Output is a TLC-style trip
CSV plus a TOML manifest with the ground truth.
"""

import logging
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import polars as pl
import tomli
import tomli_w

from stigpattern.clustering import DayClass, calendar_class
from stigpattern.config import StudyAreaConfig, SyntheticConfig
from stigpattern.errors import InfeasibleScheduleError
from stigpattern.hotspots import StudyArea, TimeSlot
from stigpattern.srf import ARCHETYPE_SHAPES, archetype_by_name, default_archetypes

logger = logging.getLogger(__name__)

TLC_COLUMNS = (
    "pickup_datetime",
    "dropoff_datetime",
    "pickup_longitude",
    "pickup_latitude",
    "dropoff_longitude",
    "dropoff_latitude",
    "passenger_count",
)
TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S"

# (first hour, end hour exclusive, archetype)
Segment = Tuple[int, int, str]

CLASS_SCHEDULES: Dict[str, Tuple[Segment, ...]] = {
    DayClass.WORKING.value: (
        (0, 5, "Asleep"), (5, 7, "Awakening"), (7, 8, "Rise"), (8, 10, "RushHour"), (10, 11, "Chill"),
        (11, 16, "Flow"), (16, 17, "Rise"), (17, 19, "RushHour"), (19, 21, "Chill"), (21, 24, "Falling"),
    ),
    DayClass.ENTERTAINMENT.value: (
        (0, 2, "Flow"), (2, 6, "Falling"), (6, 9, "Asleep"), (9, 12, "Awakening"), (12, 17, "Flow"),
        (17, 19, "Rise"), (19, 24, "RushHour"),
    ),
    DayClass.LEISURE.value: (
        (0, 3, "Falling"), (3, 11, "Asleep"), (11, 14, "Awakening"), (14, 20, "Flow"), (20, 24, "Falling"),
    ),
}


def check_schedule(schedule: Sequence[Segment]):
    """A schedule must tile hours 0..24 with known archetypes."""
    hour = 0
    for first, end, name in schedule:
        if first != hour or end <= first:
            raise InfeasibleScheduleError(f"schedule segment ({first}, {end}, {name}) leaves a gap or overlap")
        if name not in ARCHETYPE_SHAPES:
            raise InfeasibleScheduleError(f"unknown archetype {name!r} in schedule")
        hour = end
    if hour != 24:
        raise InfeasibleScheduleError(f"schedule covers {hour} h instead of 24")


def schedule_profile(schedule: Sequence[Segment], step_minutes: int = 5) -> np.ndarray:
    """Activity in [0, 1] per step, each segment shaped like its archetype."""
    check_schedule(schedule)
    bank = default_archetypes()
    per_hour = 60 // step_minutes
    return np.concatenate([
        archetype_by_name(name, bank).resampled((end - first) * per_hour) for first, end, name in schedule
    ])


@dataclass(frozen=True)
class SyntheticHotspot:
    lon: float
    lat: float
    spread_ft: float = 400.0
    peak_trips: float = 8.0


@dataclass(frozen=True)
class SyntheticTransient:
    """A cluster active in a single time slot at a constant rate."""

    lon: float
    lat: float
    slot: TimeSlot
    trips: float = 8.0
    spread_ft: float = 400.0


@dataclass(frozen=True)
class SyntheticSpec:
    area: StudyArea
    start: date
    n_days: int
    hotspots: Tuple[SyntheticHotspot, ...]
    transients: Tuple[SyntheticTransient, ...] = ()
    anomalies: Tuple[Tuple[date, str], ...] = ()
    noise_amp: float = 0.1
    background_trips: float = 0.0
    schedules: Dict[str, Tuple[Segment, ...]] = field(default_factory=lambda: dict(CLASS_SCHEDULES),
                                                      compare=False)
    step_minutes: int = 5

    def __post_init__(self):
        if self.n_days < 1:
            raise InfeasibleScheduleError(f"need at least one day, got {self.n_days}")
        if not 0 <= self.noise_amp < 1:
            raise InfeasibleScheduleError(f"noise amplitude must be in [0, 1), got {self.noise_amp}")
        if 60 % self.step_minutes:
            raise InfeasibleScheduleError(f"step of {self.step_minutes} min does not divide an hour")
        for cls in DayClass:
            if cls.value not in self.schedules:
                raise InfeasibleScheduleError(f"no schedule for class {cls.value}")
        for schedule in self.schedules.values():
            check_schedule(schedule)
        for spot in (*self.hotspots, *self.transients):
            if not bool(self.area.contains(spot.lon, spot.lat)):
                raise InfeasibleScheduleError(f"cluster center ({spot.lon}, {spot.lat}) is outside the study area")
        days = set(self.days)
        for day, cls in self.anomalies:
            if day not in days:
                raise InfeasibleScheduleError(f"anomaly date {day} is outside the generated period")
            if cls not in self.schedules:
                raise InfeasibleScheduleError(f"anomaly on {day} uses unknown class {cls!r}")

    @property
    def days(self) -> List[date]:
        return [self.start + timedelta(days=i) for i in range(self.n_days)]

    @property
    def anomaly_days(self) -> List[date]:
        return sorted(day for day, _ in self.anomalies)

    def day_class(self, day: date) -> str:
        for anomaly_day, cls in self.anomalies:
            if anomaly_day == day:
                return cls
        return calendar_class(day).value

    def profile(self, day: date) -> np.ndarray:
        return schedule_profile(self.schedules[self.day_class(day)], self.step_minutes)

    @classmethod
    def from_config(cls, config: SyntheticConfig, area: StudyAreaConfig) -> "SyntheticSpec":
        study = StudyArea(area.lon_min, area.lon_max, area.lat_min, area.lat_max)
        hotspots = tuple(
            SyntheticHotspot(h["lon"], h["lat"], h.get("spread_ft", config.spread_ft),
                             h.get("peak_trips", config.peak_trips))
            for h in config.hotspots
        ) or default_hotspots(study, config.spread_ft, config.peak_trips)
        transients = tuple(
            SyntheticTransient(t["lon"], t["lat"], TimeSlot[t["slot"].upper()], t.get("trips", config.peak_trips),
                               t.get("spread_ft", config.spread_ft))
            for t in config.transients
        )
        anomalies = tuple((date.fromisoformat(a["date"]), a["class"]) for a in config.anomalies)
        return cls(study, date.fromisoformat(config.start), config.n_days, hotspots, transients, anomalies,
                   config.noise_amp, config.background_trips)


def default_hotspots(area: StudyArea, spread_ft: float, peak_trips: float) -> Tuple[SyntheticHotspot, ...]:
    """Two clusters on the box diagonal, at one third and two thirds."""
    spots = []
    for frac in (1 / 3, 2 / 3):
        lon = area.lon_min + frac * (area.lon_max - area.lon_min)
        lat = area.lat_min + frac * (area.lat_max - area.lat_min)
        spots.append(SyntheticHotspot(round(lon, 6), round(lat, 6), spread_ft, peak_trips))
    return tuple(spots)


def _trips_around(spec: SyntheticSpec, rng: np.random.Generator, lon: float, lat: float, spread_ft: float,
                  counts: np.ndarray) -> Dict[str, np.ndarray]:
    """Trips starting and ending near one center; ``counts`` per step."""
    steps = np.repeat(np.arange(counts.size), counts)
    n = steps.size
    cx, cy = spec.area.project(lon, lat)
    x = cx + rng.normal(0.0, spread_ft, n)
    y = cy + rng.normal(0.0, spread_ft, n)
    lons, lats = spec.area.unproject(x, y)
    offsets = rng.integers(0, spec.step_minutes, n)
    minutes = steps * spec.step_minutes + offsets
    return {"minutes": minutes, "lon": lons, "lat": lats, "dlon": lons, "dlat": lats}


def _background(spec: SyntheticSpec, rng: np.random.Generator, steps_per_day: int) -> Dict[str, np.ndarray]:
    counts = rng.poisson(spec.background_trips, steps_per_day)
    steps = np.repeat(np.arange(steps_per_day), counts)
    n = steps.size
    area = spec.area
    return {
        "minutes": steps * spec.step_minutes + rng.integers(0, spec.step_minutes, n),
        "lon": rng.uniform(area.lon_min, area.lon_max, n),
        "lat": rng.uniform(area.lat_min, area.lat_max, n),
        "dlon": rng.uniform(area.lon_min, area.lon_max, n),
        "dlat": rng.uniform(area.lat_min, area.lat_max, n),
    }


def scheduled_counts(spec: SyntheticSpec, peak_trips: float, day: date, rng: np.random.Generator) -> np.ndarray:
    """Trips per step: ``round(peak * profile * (1 + U(-noise, noise)))``."""
    profile = spec.profile(day)
    jitter = rng.uniform(-spec.noise_amp, spec.noise_amp, profile.size)
    return np.rint(peak_trips * profile * (1.0 + jitter)).astype(np.int64)


def generate_trips(spec: SyntheticSpec, seed: int) -> pl.DataFrame:
    """Trip rows in TLC column order, sorted by pickup time."""
    rng = np.random.default_rng(seed)
    steps_per_day = 24 * 60 // spec.step_minutes
    parts = []
    for day in spec.days:
        midnight = datetime(day.year, day.month, day.day)
        chunks = []
        for spot in spec.hotspots:
            counts = scheduled_counts(spec, spot.peak_trips, day, rng)
            chunks.append(_trips_around(spec, rng, spot.lon, spot.lat, spot.spread_ft, counts))
        for transient in spec.transients:
            hours = np.arange(steps_per_day) * spec.step_minutes // 60
            active = np.isin(hours, transient.slot.hours)
            jitter = rng.uniform(-spec.noise_amp, spec.noise_amp, steps_per_day)
            counts = np.where(active, np.rint(transient.trips * (1.0 + jitter)), 0).astype(np.int64)
            chunks.append(_trips_around(spec, rng, transient.lon, transient.lat, transient.spread_ft, counts))
        if spec.background_trips > 0:
            chunks.append(_background(spec, rng, steps_per_day))
        merged = {key: np.concatenate([c[key] for c in chunks]) for key in ("minutes", "lon", "lat", "dlon", "dlat")}
        # dropoff on the last minute of the pickup step
        dropoff = merged["minutes"] // spec.step_minutes * spec.step_minutes + spec.step_minutes - 1
        pickup = [midnight + timedelta(minutes=int(m)) for m in merged["minutes"]]
        parts.append(pl.DataFrame({
            "pickup_datetime": pickup,
            "dropoff_datetime": [midnight + timedelta(minutes=int(m)) for m in dropoff],
            "pickup_longitude": merged["lon"],
            "pickup_latitude": merged["lat"],
            "dropoff_longitude": merged["dlon"],
            "dropoff_latitude": merged["dlat"],
            "passenger_count": np.ones(merged["minutes"].size, dtype=np.int64),
        }, schema={
            "pickup_datetime": pl.Datetime("us"),
            "dropoff_datetime": pl.Datetime("us"),
            "pickup_longitude": pl.Float64,
            "pickup_latitude": pl.Float64,
            "dropoff_longitude": pl.Float64,
            "dropoff_latitude": pl.Float64,
            "passenger_count": pl.Int64,
        }))
    trips = pl.concat(parts, how="vertical")
    return trips.with_row_index("_order").sort(["pickup_datetime", "_order"]).drop("_order")


@dataclass(frozen=True)
class SyntheticResult:
    csv_path: Path
    manifest_path: Path
    rows: int


def ground_truth(spec: SyntheticSpec, seed: int, rows: int) -> dict:
    return {
        "seed": int(seed),
        "start": spec.start.isoformat(),
        "n_days": spec.n_days,
        "rows": rows,
        "noise_amp": spec.noise_amp,
        "hotspots": [
            {"lon": h.lon, "lat": h.lat, "spread_ft": h.spread_ft, "peak_trips": h.peak_trips}
            for h in spec.hotspots
        ],
        "transients": [
            {"lon": t.lon, "lat": t.lat, "slot": t.slot.name, "trips": t.trips} for t in spec.transients
        ],
        "anomalies": [{"date": d.isoformat(), "class": c} for d, c in sorted(spec.anomalies)],
        "day_classes": {d.isoformat(): spec.day_class(d) for d in spec.days},
    }


def generate_synthetic(spec: SyntheticSpec, seed: int, out_dir: Union[str, Path],
                       name: str = "synthetic_trips") -> SyntheticResult:
    """Write ``<name>.csv`` and ``<name>_manifest.toml``; same seed gives identical bytes.

    Args:
        spec: what to generate
        seed: seed of every random draw
        out_dir: output directory (created if needed)
        name: file stem

    Returns:
        SyntheticResult with both paths and the row count
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trips = generate_trips(spec, seed)
    csv_path = out_dir / f"{name}.csv"
    trips.write_csv(csv_path, datetime_format=TIMESTAMP_FORMAT, float_precision=7)
    manifest_path = out_dir / f"{name}_manifest.toml"
    manifest_path.write_text(tomli_w.dumps(ground_truth(spec, seed, trips.height)))
    logger.info("synthetic data: %d trip row(s) over %d day(s) -> %s", trips.height, spec.n_days, csv_path)
    return SyntheticResult(csv_path, manifest_path, trips.height)


def read_ground_truth(path: Union[str, Path]) -> dict:
    return tomli.loads(Path(path).read_text())


def anomaly_dates(manifest: dict) -> List[date]:
    return [date.fromisoformat(a["date"]) for a in manifest.get("anomalies", [])]


def class_of(manifest: dict, day: date) -> Optional[str]:
    return manifest.get("day_classes", {}).get(day.isoformat())
