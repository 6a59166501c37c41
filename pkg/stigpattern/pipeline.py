"""End-to-end orchestration: hotspots -> train -> characterize -> detect."""

import logging
import platform
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import date, datetime
from importlib import metadata
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import tomli_w

from stigpattern.clustering import (
    AnomalyReport,
    ClusterModel,
    build_similarity_matrix,
    calendar_class,
    classify_days,
    fcm_fit,
    membership_of,
    name_clusters,
    score_days,
    similarity_rows,
    training_max_ei,
)
from stigpattern.config import PipelineConfig, load_config
from stigpattern.errors import InvalidParameterError, PipelineStageError
from stigpattern.exporters import (
    membership_to_pgm,
    model_memberships,
    write_activity_levels_csv,
    write_ei_report_csv,
    write_hotspots_csv,
    write_membership_csv,
    write_similarity_csv,
)
from stigpattern.hotspots import (
    BinConfig,
    BinnedActivity,
    Hotspot,
    StudyArea,
    extract_hotspots,
    hotspot_series_from_bins,
    slot_trails,
)
from stigpattern.perceptron import (
    DaySimilarityParams,
    DaySimilaritySrf,
    StigmergicPerceptron,
    build_training_sets,
    load_perceptron,
    make_labeled_pairs,
    save_day_similarity,
    save_perceptron,
    train_day_similarity,
    train_perceptron,
)
from stigpattern.series import ActivityLevelSeries
from stigpattern.srf import default_archetypes
from stigpattern.trails import trail_to_pgm
from stigpattern.training import DeConfig, LabeledWindow, StaticBounds
from stigpattern.transforms import SigmoidParams

logger = logging.getLogger(__name__)

DateRange = Tuple[date, date]


@dataclass
class RunResult:
    hotspots: List[Hotspot] = field(default_factory=list)
    levels: Dict[date, ActivityLevelSeries] = field(default_factory=dict)
    reports: List[AnomalyReport] = field(default_factory=list)
    artifacts: List[Path] = field(default_factory=list)
    manifest: Optional[Path] = None

    @property
    def flagged(self) -> List[AnomalyReport]:
        return [r for r in self.reports if r.flagged]


def _in_range(day: date, bounds: DateRange) -> bool:
    return bounds[0] <= day <= bounds[1]


def _version(package: str) -> str:
    try:
        return metadata.version(package)
    except metadata.PackageNotFoundError:
        return "unknown"


class StigPatternSystem:
    """Pipeline state plus one method per stage.

    Stages run in order and keep their results on the instance; a failing
    stage raises PipelineStageError tagged with the stage name.
    """

    def __init__(self, config: Optional[PipelineConfig] = None):
        self.config = config or load_config()
        sa = self.config.study_area
        self.area = StudyArea(sa.lon_min, sa.lon_max, sa.lat_min, sa.lat_max)
        self.grid = self.area.grid(self.config.binning.nx, self.config.binning.ny)
        self.timings: Dict[str, float] = {}
        self.artifacts: List[Path] = []
        self.ingest_stats = None
        self.binned: Optional[BinnedActivity] = None
        self.hotspots: List[Hotspot] = []
        self.perceptron: Optional[StigmergicPerceptron] = None
        self.levels: Dict[date, ActivityLevelSeries] = {}
        self.dsrf: Optional[DaySimilaritySrf] = None
        self.model: Optional[ClusterModel] = None
        self.reports: List[AnomalyReport] = []

    @property
    def out_dir(self) -> Path:
        return self.config.out_dir

    @contextmanager
    def stage(self, name: str):
        started = time.perf_counter()
        logger.info("stage %s: start", name)
        try:
            yield
        except PipelineStageError:
            raise
        except Exception as e:
            logger.error("stage %s failed: %s", name, e)
            raise PipelineStageError(name, e) from e
        finally:
            self.timings[name] = self.timings.get(name, 0.0) + time.perf_counter() - started
        logger.info("stage %s: done in %.2fs", name, self.timings[name])

    def _artifact(self, path: Path) -> Path:
        self.artifacts.append(Path(path))
        return path

    def _de_config(self, population: int, generations: int, seed: int, workers: int = 1) -> DeConfig:
        t = self.config.training
        return DeConfig(bounds=((0.0, 1.0),), population=population, differential_weight=t.differential_weight,
                        crossover=t.crossover, generations=generations, rng_seed=seed, workers=workers)

    def ingest(self, input_path: Optional[str] = None) -> BinnedActivity:
        """Stream the trip file into spatiotemporal bins; events are not kept."""
        from loaders import bin_csv

        with self.stage("ingest"):
            path = input_path or self.config.paths.input
            if not path:
                raise InvalidParameterError("no input file configured ([paths] input or --input)")
            binning = self.config.binning
            self.binned, self.ingest_stats = bin_csv(
                path, BinConfig(self.grid, binning.step_minutes), self.area, binning.chunk_rows)
        return self.binned

    def find_hotspots(self) -> List[Hotspot]:
        with self.stage("hotspots"):
            if self.binned is None:
                raise InvalidParameterError("no events ingested")
            hc = self.config.hotspots
            radius = hc.mark_radius_cells * max(self.grid.cell_width, self.grid.cell_height)
            trails = slot_trails(self.binned, SigmoidParams(hc.smooth_steepness, hc.smooth_threshold), radius,
                                 hc.evaporation, workers=hc.workers)
            self.hotspots = extract_hotspots(trails, hc.relevance_quantile, hc.min_slots, hc.min_area)
            for slot, trail in trails.items():
                self._artifact(trail_to_pgm(trail, self.out_dir / "trails" / f"{slot.label}.pgm"))
            self._artifact(write_hotspots_csv(self.hotspots, self.area, self.out_dir / "hotspots.csv"))
        return self.hotspots

    def _archetypes(self):
        srf = self.config.srf
        overrides = None
        if srf.archetypes_csv:
            from loaders import ArchetypeCSVLoader

            overrides = ArchetypeCSVLoader().load(srf.archetypes_csv)
        return default_archetypes(srf.window, overrides)

    def train(self, params_file: Optional[str] = None,
              labeled: Optional[Dict[str, List[LabeledWindow]]] = None) -> StigmergicPerceptron:
        """Load the perceptron from ``params_file`` or train it.

        ``labeled`` maps archetype names to labeled windows that replace the
        synthesized set of those archetypes.
        """
        with self.stage("train"):
            srf = self.config.srf
            params_file = params_file or srf.params_file
            archetypes = self._archetypes()
            if params_file:
                self.perceptron = load_perceptron(params_file, archetypes)
                logger.info("loaded perceptron parameters from %s", params_file)
            else:
                t = self.config.training
                datasets = build_training_sets(archetypes, t.n_windows, t.noise_amp, t.max_shift,
                                               self.config.seed)
                unknown = sorted(set(labeled or {}) - set(datasets))
                if unknown:
                    raise InvalidParameterError(f"unknown archetype(s) {unknown}")
                datasets.update(labeled or {})
                self.perceptron = train_perceptron(
                    archetypes,
                    datasets=datasets,
                    config=self._de_config(t.population, t.generations, self.config.seed, t.workers),
                    bounds=StaticBounds(evaporation=(t.delta_min, t.delta_max)),
                    sweep_points=t.sweep_points,
                    window_hop=srf.window_hop,
                    seed=self.config.seed,
                    manifest_dir=self.out_dir / "training",
                )
                self.artifacts.extend(sorted((self.out_dir / "training").glob("srf_*.toml")))
            self._artifact(save_perceptron(self.perceptron, self.out_dir / "perceptron.toml"))
        return self.perceptron

    def characterize(self, hotspot_id: Optional[str] = None,
                     day_range: Optional[DateRange] = None) -> Dict[date, ActivityLevelSeries]:
        with self.stage("characterize"):
            if self.perceptron is None or self.binned is None:
                raise InvalidParameterError("characterize needs a perceptron and ingested events")
            hotspot_id = hotspot_id or self.config.detection.hotspot
            hotspot = next((h for h in self.hotspots if h.id == hotspot_id), None)
            if hotspot is None:
                raise InvalidParameterError(f"hotspot {hotspot_id!r} not found among {[h.id for h in self.hotspots]}")
            series = hotspot_series_from_bins(self.binned, hotspot)
            self.levels = {
                day: self.perceptron.characterize(s)
                for day, s in series.items() if day_range is None or _in_range(day, day_range)
            }
            self._artifact(write_activity_levels_csv(self.levels.values(), self.out_dir / "activity_levels.csv"))
        return self.levels

    def detect(self, train_range: Optional[DateRange] = None,
               eval_range: Optional[DateRange] = None) -> List[AnomalyReport]:
        with self.stage("detect"):
            if not self.levels:
                raise InvalidParameterError("detect needs characterized days")
            det, ds, cl = self.config.detection, self.config.day_similarity, self.config.clustering
            default_train, default_eval = det.ranges(self.levels)
            train_range = train_range or default_train
            eval_range = eval_range or default_eval
            train = [self.levels[d] for d in sorted(self.levels) if _in_range(d, train_range)]
            evaluation = [self.levels[d] for d in sorted(self.levels) if _in_range(d, eval_range)]
            if len(train) < cl.c:
                raise InvalidParameterError(f"need at least {cl.c} training days, got {len(train)}")

            self.dsrf = DaySimilaritySrf(DaySimilarityParams(
                ds.mark_width, ds.evaporation, SigmoidParams(ds.activation_steepness, ds.activation_threshold)))
            if ds.train:
                pairs = make_labeled_pairs({s.day: s for s in train}, calendar_class, ds.max_pairs,
                                           self.config.seed)
                config = self._de_config(ds.population, ds.generations, self.config.seed + 100)
                self.dsrf = self.dsrf.with_params(train_day_similarity(self.dsrf, pairs, config))
            self._artifact(save_day_similarity(self.dsrf, self.out_dir / "day_similarity.toml"))

            matrix = build_similarity_matrix(train, self.dsrf)
            self.model = fcm_fit(matrix, cl.c, cl.m, cl.tol, cl.max_iter, self.config.seed)
            train_days = [s.day for s in train]
            names = name_clusters(self.model, [calendar_class(d) for d in train_days])
            threshold = training_max_ei(score_days(self.model, matrix.values, train_days, names))

            eval_days = [s.day for s in evaluation]
            rows = similarity_rows(evaluation, train, self.dsrf) if evaluation else None
            scores = score_days(self.model, rows, eval_days, names) if evaluation else []
            self.reports = classify_days(scores, threshold, det.margin)

            self._artifact(write_similarity_csv(matrix, self.out_dir / "similarity_matrix.csv"))
            all_days, memberships = model_memberships(
                self.model, eval_days, membership_of(self.model, rows) if evaluation else None)
            self._artifact(write_membership_csv(memberships, all_days, names, self.out_dir / "membership.csv"))
            self._artifact(membership_to_pgm(memberships, self.out_dir / "membership.pgm"))
            self._artifact(write_ei_report_csv(self.reports, self.out_dir / "ei_report.csv"))
            logger.info("detect: training EI max %.4f, %d of %d evaluation day(s) flagged",
                        threshold, sum(r.flagged for r in self.reports), len(self.reports))
        return self.reports

    def write_manifest(self) -> Path:
        manifest = {
            "created": datetime.now().isoformat(timespec="seconds"),
            "config": self.config.source or "defaults",
            "versions": {
                "stigpattern": _version("StigPattern"),
                "python": platform.python_version(),
                "numpy": _version("numpy"),
                "polars": _version("polars"),
                "scikit-learn": _version("scikit-learn"),
                "scipy": _version("scipy"),
            },
            "seeds": {"base": self.config.seed},
            "timings_seconds": {k: round(v, 3) for k, v in self.timings.items()},
            "artifacts": [str(p.relative_to(self.out_dir)) if p.is_relative_to(self.out_dir) else str(p)
                          for p in self.artifacts],
        }
        if self.ingest_stats is not None:
            manifest["ingest"] = {
                "rows_total": self.ingest_stats.rows_total,
                "rows_dropped": self.ingest_stats.rows_dropped,
                "events_emitted": self.ingest_stats.events_emitted,
                "rows_per_second": round(min(self.ingest_stats.rows_per_second, 1e12), 1),
            }
        path = self.out_dir / "run_manifest.toml"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(tomli_w.dumps(manifest))
        return path

    def run(self, input_path: Optional[str] = None) -> RunResult:
        """All stages in order, then the run manifest."""
        self.ingest(input_path)
        self.find_hotspots()
        self.train()
        self.characterize()
        self.detect()
        manifest = self.write_manifest()
        return RunResult(self.hotspots, self.levels, self.reports, list(self.artifacts), manifest)


def run_pipeline(config: Optional[PipelineConfig] = None, input_path: Optional[str] = None) -> RunResult:
    return StigPatternSystem(config).run(input_path)
