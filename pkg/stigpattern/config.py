"""Pipeline configuration: TOML sections mapped onto frozen dataclasses.

Resolution order for the file: explicit path, then ``STIGPATTERN_CONFIG``,
then built-in defaults. ``STIGPATTERN_OUT`` and ``STIGPATTERN_SEED`` override
``[paths] out_dir`` and ``[seeds] base``.
"""

import logging
import os
from dataclasses import dataclass, field, fields, replace
from datetime import date
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import tomli

from stigpattern.errors import ConfigError

logger = logging.getLogger(__name__)

CONFIG_ENV = "STIGPATTERN_CONFIG"
OUT_ENV = "STIGPATTERN_OUT"
SEED_ENV = "STIGPATTERN_SEED"


def _require(condition: bool, message: str):
    if not condition:
        raise ConfigError(message)


@dataclass(frozen=True)
class StudyAreaConfig:
    lon_min: float = -74.03
    lon_max: float = -73.90
    lat_min: float = 40.69
    lat_max: float = 40.89

    def validate(self):
        _require(-180 <= self.lon_min < self.lon_max <= 180, "[study_area] needs lon_min < lon_max")
        _require(-90 <= self.lat_min < self.lat_max <= 90, "[study_area] needs lat_min < lat_max")


@dataclass(frozen=True)
class BinningConfig:
    nx: int = 200
    ny: int = 200
    step_minutes: int = 5
    chunk_rows: int = 100_000

    def validate(self):
        _require(self.nx >= 2 and self.ny >= 2, "[binning] nx and ny must be >= 2")
        _require(self.chunk_rows >= 1, "[binning] chunk_rows must be >= 1")
        _require(self.step_minutes >= 1 and 1440 % self.step_minutes == 0,
                 "[binning] step_minutes must divide a day")


@dataclass(frozen=True)
class HotspotConfig:
    relevance_quantile: float = 0.9
    min_slots: int = 4
    min_area: int = 4
    mark_radius_cells: float = 2.0
    evaporation: float = 0.05
    smooth_steepness: float = 10.0
    smooth_threshold: float = 0.05
    workers: int = 1

    def validate(self):
        _require(0 <= self.relevance_quantile <= 1, "[hotspots] relevance_quantile must be in [0, 1]")
        _require(1 <= self.min_slots <= 4, "[hotspots] min_slots must be in [1, 4]")
        _require(self.min_area >= 1, "[hotspots] min_area must be >= 1")
        _require(self.mark_radius_cells > 0, "[hotspots] mark_radius_cells must be > 0")
        _require(self.evaporation >= 0, "[hotspots] evaporation must be >= 0")
        _require(self.smooth_steepness > 0, "[hotspots] smooth_steepness must be > 0")
        _require(self.workers >= 1, "[hotspots] workers must be >= 1")


@dataclass(frozen=True)
class SrfConfig:
    window: int = 72
    window_hop: int = 36
    archetypes_csv: str = ""
    params_file: str = ""

    def validate(self):
        _require(self.window >= 2, "[srf] window must be >= 2")
        _require(self.window_hop >= 1, "[srf] window_hop must be >= 1")


@dataclass(frozen=True)
class TrainingConfig:
    n_windows: int = 20
    noise_amp: float = 0.05
    max_shift: int = 6
    population: int = 20
    generations: int = 100
    differential_weight: float = 0.5
    crossover: float = 0.9
    sweep_points: int = 50
    delta_min: float = 0.01
    delta_max: float = 1.0
    workers: int = 1

    def validate(self):
        _require(self.n_windows >= 1, "[training] n_windows must be >= 1")
        _require(self.noise_amp >= 0, "[training] noise_amp must be >= 0")
        _require(self.max_shift >= 0, "[training] max_shift must be >= 0")
        _require(self.population >= 4, "[training] population must be >= 4")
        _require(self.generations >= 0, "[training] generations must be >= 0")
        _require(0 < self.differential_weight <= 2, "[training] differential_weight must be in (0, 2]")
        _require(0 <= self.crossover <= 1, "[training] crossover must be in [0, 1]")
        _require(self.sweep_points >= 10, "[training] sweep_points must be >= 10")
        _require(0 < self.delta_min <= self.delta_max, "[training] need 0 < delta_min <= delta_max")
        _require(self.workers >= 1, "[training] workers must be >= 1")


@dataclass(frozen=True)
class DaySimilarityConfig:
    mark_width: float = 0.1
    evaporation: float = 0.2
    activation_steepness: float = 20.0
    activation_threshold: float = 0.6
    train: bool = True
    max_pairs: int = 300
    population: int = 20
    generations: int = 100

    def validate(self):
        _require(self.mark_width > 0, "[day_similarity] mark_width must be > 0")
        _require(self.evaporation >= 0, "[day_similarity] evaporation must be >= 0")
        _require(self.activation_steepness > 0, "[day_similarity] activation_steepness must be > 0")
        _require(self.max_pairs >= 1, "[day_similarity] max_pairs must be >= 1")
        _require(self.population >= 4, "[day_similarity] population must be >= 4")
        _require(self.generations >= 0, "[day_similarity] generations must be >= 0")


@dataclass(frozen=True)
class ClusteringConfig:
    c: int = 3
    m: float = 2.0
    tol: float = 1e-6
    max_iter: int = 300

    def validate(self):
        _require(self.c >= 2, "[clustering] c must be >= 2")
        _require(self.m > 1, "[clustering] m must be > 1")
        _require(self.tol > 0, "[clustering] tol must be > 0")
        _require(self.max_iter >= 1, "[clustering] max_iter must be >= 1")


@dataclass(frozen=True)
class DetectionConfig:
    """Training and evaluation date ranges (inclusive); empty means "derive from data"."""

    hotspot: str = "A"
    train_from: str = ""
    train_to: str = ""
    eval_from: str = ""
    eval_to: str = ""
    train_fraction: float = 0.6
    margin: float = 0.0

    def validate(self):
        for name in ("train_from", "train_to", "eval_from", "eval_to"):
            value = getattr(self, name)
            if value:
                try:
                    date.fromisoformat(value)
                except ValueError:
                    raise ConfigError(f"[detection] {name} must be an ISO date, got {value!r}")
        _require(0 < self.train_fraction < 1, "[detection] train_fraction must be in (0, 1)")
        _require(self.margin >= 0, "[detection] margin must be >= 0")

    def ranges(self, days) -> Tuple[Tuple[date, date], Tuple[date, date]]:
        """Resolve (train range, eval range) against the days available."""
        days = sorted(days)
        _require(len(days) >= 2, "[detection] need at least two days of data")
        split = max(1, min(len(days) - 1, int(round(len(days) * self.train_fraction))))
        train = (date.fromisoformat(self.train_from) if self.train_from else days[0],
                 date.fromisoformat(self.train_to) if self.train_to else days[split - 1])
        evaluation = (date.fromisoformat(self.eval_from) if self.eval_from else days[split],
                      date.fromisoformat(self.eval_to) if self.eval_to else days[-1])
        return train, evaluation


@dataclass(frozen=True)
class SyntheticConfig:
    start: str = "2015-02-02"
    n_days: int = 28
    peak_trips: float = 8.0
    spread_ft: float = 400.0
    noise_amp: float = 0.1
    background_trips: float = 0.5
    hotspots: Tuple[Dict[str, Any], ...] = ()
    transients: Tuple[Dict[str, Any], ...] = ()
    anomalies: Tuple[Dict[str, Any], ...] = ()

    def validate(self):
        try:
            date.fromisoformat(self.start)
        except ValueError:
            raise ConfigError(f"[synthetic] start must be an ISO date, got {self.start!r}")
        _require(self.n_days >= 1, "[synthetic] n_days must be >= 1")
        _require(self.peak_trips > 0, "[synthetic] peak_trips must be > 0")
        _require(self.spread_ft > 0, "[synthetic] spread_ft must be > 0")
        _require(0 <= self.noise_amp < 1, "[synthetic] noise_amp must be in [0, 1)")
        _require(self.background_trips >= 0, "[synthetic] background_trips must be >= 0")


@dataclass(frozen=True)
class PathsConfig:
    input: str = ""
    out_dir: str = "outputs"


@dataclass(frozen=True)
class SeedsConfig:
    base: int = 0

    def validate(self):
        _require(self.base >= 0, "[seeds] base must be >= 0")


SECTIONS = {
    "study_area": StudyAreaConfig,
    "binning": BinningConfig,
    "hotspots": HotspotConfig,
    "srf": SrfConfig,
    "training": TrainingConfig,
    "day_similarity": DaySimilarityConfig,
    "clustering": ClusteringConfig,
    "detection": DetectionConfig,
    "synthetic": SyntheticConfig,
    "paths": PathsConfig,
    "seeds": SeedsConfig,
}


@dataclass(frozen=True)
class PipelineConfig:
    study_area: StudyAreaConfig = field(default_factory=StudyAreaConfig)
    binning: BinningConfig = field(default_factory=BinningConfig)
    hotspots: HotspotConfig = field(default_factory=HotspotConfig)
    srf: SrfConfig = field(default_factory=SrfConfig)
    training: TrainingConfig = field(default_factory=TrainingConfig)
    day_similarity: DaySimilarityConfig = field(default_factory=DaySimilarityConfig)
    clustering: ClusteringConfig = field(default_factory=ClusteringConfig)
    detection: DetectionConfig = field(default_factory=DetectionConfig)
    synthetic: SyntheticConfig = field(default_factory=SyntheticConfig)
    paths: PathsConfig = field(default_factory=PathsConfig)
    seeds: SeedsConfig = field(default_factory=SeedsConfig)
    source: Optional[str] = None

    @property
    def out_dir(self) -> Path:
        return Path(self.paths.out_dir)

    @property
    def seed(self) -> int:
        return self.seeds.base

    def with_overrides(self, out_dir: Optional[str] = None, seed: Optional[int] = None,
                       input_path: Optional[str] = None) -> "PipelineConfig":
        paths, seeds = self.paths, self.seeds
        if out_dir is not None:
            paths = replace(paths, out_dir=str(out_dir))
        if input_path is not None:
            paths = replace(paths, input=str(input_path))
        if seed is not None:
            seeds = SeedsConfig(int(seed))
            seeds.validate()
        return replace(self, paths=paths, seeds=seeds)


def _build_section(name: str, table: Dict[str, Any]):
    cls = SECTIONS[name]
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(table) - set(known))
    if unknown:
        raise ConfigError(f"[{name}] unknown key(s): {', '.join(unknown)}")
    values = {}
    for key, value in table.items():
        default = known[key].default
        if isinstance(default, tuple):
            value = tuple(value)
        elif isinstance(default, bool):
            if not isinstance(value, bool):
                raise ConfigError(f"[{name}] {key} must be true or false")
        elif isinstance(default, (int, float)) and not isinstance(value, (int, float)):
            raise ConfigError(f"[{name}] {key} must be a number, got {value!r}")
        elif isinstance(default, int) and isinstance(value, float):
            if not value.is_integer():
                raise ConfigError(f"[{name}] {key} must be an integer, got {value}")
            value = int(value)
        elif isinstance(default, str) and not isinstance(value, str):
            raise ConfigError(f"[{name}] {key} must be a string, got {value!r}")
        values[key] = value
    section = cls(**values)
    if hasattr(section, "validate"):
        section.validate()
    return section


def _resolve(value: str, base: Path) -> str:
    if not value or Path(value).is_absolute():
        return value
    return str((base / value).resolve())


def config_from_dict(data: Dict[str, Any], base_dir: Optional[Path] = None,
                     source: Optional[str] = None) -> PipelineConfig:
    unknown = sorted(set(data) - set(SECTIONS))
    if unknown:
        raise ConfigError(f"unknown config section(s): {', '.join(unknown)}")
    sections = {}
    for name, table in data.items():
        if not isinstance(table, dict):
            raise ConfigError(f"[{name}] must be a table")
        sections[name] = _build_section(name, table)
    config = PipelineConfig(**sections, source=source)
    if base_dir is not None:
        paths, srf = config.paths, config.srf
        config = replace(
            config,
            paths=PathsConfig(input=_resolve(paths.input, base_dir), out_dir=_resolve(paths.out_dir, base_dir)),
            srf=replace(srf, archetypes_csv=_resolve(srf.archetypes_csv, base_dir),
                        params_file=_resolve(srf.params_file, base_dir)),
        )
    return config


def load_config(path: Optional[Union[str, Path]] = None) -> PipelineConfig:
    """Read the pipeline config and apply environment overrides.

    Args:
        path: TOML file; falls back to ``$STIGPATTERN_CONFIG``, then defaults

    Returns:
        PipelineConfig
    """
    path = path or os.environ.get(CONFIG_ENV)
    if path:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            data = tomli.loads(path.read_text())
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
        config = config_from_dict(data, path.parent.resolve(), str(path))
        logger.info("loaded config from %s", path)
    else:
        config = PipelineConfig()

    out_dir = os.environ.get(OUT_ENV)
    seed = os.environ.get(SEED_ENV)
    if seed is not None:
        try:
            seed = int(seed)
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {seed!r}")
    return config.with_overrides(out_dir=out_dir or None, seed=seed)
