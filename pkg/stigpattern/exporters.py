"""CSV and PGM exports of pipeline results."""

from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
import polars as pl

from stigpattern.clustering import AnomalyReport, ClusterModel, SimilarityMatrix
from stigpattern.hotspots import Hotspot, StudyArea
from stigpattern.series import ActivityLevelSeries
from stigpattern.trails import matrix_to_pgm

FLOAT_PRECISION = 6

PathLike = Union[str, Path]


def _write(frame: pl.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.write_csv(path, float_precision=FLOAT_PRECISION)
    return path


def write_hotspots_csv(hotspots: Sequence[Hotspot], area: StudyArea, path: PathLike) -> Path:
    """One row per hotspot; ``cells`` lists ``ix:iy`` pairs separated by ``;``."""
    lon, lat = area.unproject([h.centroid[0] for h in hotspots], [h.centroid[1] for h in hotspots])
    frame = pl.DataFrame({
        "id": [h.id for h in hotspots],
        "area_cells": [h.area for h in hotspots],
        "cells": [";".join(f"{ix}:{iy}" for ix, iy in sorted(h.cells)) for h in hotspots],
        "centroid_lon": np.atleast_1d(lon).astype(float),
        "centroid_lat": np.atleast_1d(lat).astype(float),
        "intensity": [h.intensity for h in hotspots],
    }, schema={"id": pl.Utf8, "area_cells": pl.Int64, "cells": pl.Utf8, "centroid_lon": pl.Float64,
               "centroid_lat": pl.Float64, "intensity": pl.Float64})
    return _write(frame, path)


def write_activity_levels_csv(series: Iterable[ActivityLevelSeries], path: PathLike) -> Path:
    """Long format: date, hotspot, window_index, level."""
    rows = [
        (s.day.isoformat(), s.hotspot or "", i, float(level))
        for s in series for i, level in enumerate(s.levels)
    ]
    frame = pl.DataFrame(rows, schema={"date": pl.Utf8, "hotspot": pl.Utf8, "window_index": pl.Int64,
                                       "level": pl.Float64}, orient="row")
    return _write(frame, path)


def write_similarity_csv(matrix: SimilarityMatrix, path: PathLike) -> Path:
    labels = [d.isoformat() for d in matrix.days]
    frame = pl.DataFrame({"date": labels, **{label: matrix.values[:, j] for j, label in enumerate(labels)}})
    return _write(frame, path)


def write_membership_csv(memberships: np.ndarray, days: Sequence, cluster_names: Dict[int, str],
                         path: PathLike) -> Path:
    """Date by cluster matrix of membership degrees."""
    memberships = np.atleast_2d(memberships)
    columns = {"date": [d.isoformat() for d in days]}
    for k in range(memberships.shape[1]):
        columns[cluster_names.get(k, f"cluster{k}")] = memberships[:, k]
    return _write(pl.DataFrame(columns), path)


def membership_to_pgm(memberships: np.ndarray, path: PathLike) -> Path:
    """Grey-level image, one row per day and one column per cluster."""
    return matrix_to_pgm(np.atleast_2d(memberships), path)


def write_ei_report_csv(reports: Sequence[AnomalyReport], path: PathLike) -> Path:
    """Ranking of days by EI: date, weekday, expected cluster, EI, flagged, threshold."""
    frame = pl.DataFrame({
        "date": [r.day.isoformat() for r in reports],
        "weekday": [r.day.strftime("%A") for r in reports],
        "expected_cluster": [r.expected_cluster for r in reports],
        "ei": [r.ei for r in reports],
        "flagged": [r.flagged for r in reports],
        "threshold": [r.threshold for r in reports],
    }, schema={"date": pl.Utf8, "weekday": pl.Utf8, "expected_cluster": pl.Utf8, "ei": pl.Float64,
               "flagged": pl.Boolean, "threshold": pl.Float64})
    return _write(frame, path)


def model_memberships(model: ClusterModel, extra_days: Optional[List] = None,
                      extra: Optional[np.ndarray] = None):
    """Training memberships, optionally followed by those of further days."""
    days = list(model.days)
    values = model.memberships
    if extra_days:
        days += list(extra_days)
        values = np.vstack([values, np.atleast_2d(extra)])
    return days, values
