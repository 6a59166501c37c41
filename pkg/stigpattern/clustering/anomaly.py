"""Behavioural classes, the Extraneousness Index and unexpected-day detection."""

import logging
import math
from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from stigpattern.errors import InvalidParameterError, LengthMismatchError
from .fcm import ClusterModel, membership_of

logger = logging.getLogger(__name__)

UNIT_SUM_TOLERANCE = 1e-6


class DayClass(str, Enum):
    WORKING = "Working"
    ENTERTAINMENT = "Entertainment"
    LEISURE = "Leisure"


def calendar_class(day: date) -> DayClass:
    """Mon-Thu Working, Fri-Sat Entertainment, Sun Leisure."""
    weekday = day.weekday()
    if weekday <= 3:
        return DayClass.WORKING
    if weekday <= 5:
        return DayClass.ENTERTAINMENT
    return DayClass.LEISURE


def name_clusters(model: ClusterModel, day_classes: Sequence[str]) -> Dict[int, str]:
    """Name each cluster after a calendar class.

    Agreement counts, for each (cluster, class), the training days of that
    class whose highest membership falls in that cluster. A one-to-one
    assignment maximizing total agreement picks the names; clusters left
    over (c larger than the number of classes) are named ``cluster<k>``.
    """
    if len(day_classes) != model.memberships.shape[0]:
        raise LengthMismatchError(f"{len(day_classes)} classes for {model.memberships.shape[0]} training days")
    classes = sorted({str(getattr(c, "value", c)) for c in day_classes})
    labels = model.hard_labels()
    agreement = np.zeros((model.c, len(classes)))
    for cluster, cls in zip(labels, day_classes):
        agreement[cluster, classes.index(str(getattr(cls, "value", cls)))] += 1
    rows, cols = linear_sum_assignment(agreement, maximize=True)
    names = {k: f"cluster{k}" for k in range(model.c)}
    names.update({int(r): classes[c] for r, c in zip(rows, cols)})
    logger.info("cluster names: %s", names)
    return names


def _check_unit_sum(u: np.ndarray, what: str):
    if u.ndim != 1 or u.size == 0:
        raise InvalidParameterError(f"{what} must be a non-empty 1-D vector")
    if np.any(u < -UNIT_SUM_TOLERANCE) or not math.isclose(float(u.sum()), 1.0, abs_tol=UNIT_SUM_TOLERANCE):
        raise InvalidParameterError(f"{what} must be non-negative and sum to 1, got sum {u.sum():.6g}")


def extraneousness_index(u_day, u_expected_centroid, c: Optional[int] = None) -> float:
    """Half the L1 distance between two membership vectors, in [0, 1]."""
    u_day = np.asarray(u_day, dtype=float)
    u_ref = np.asarray(u_expected_centroid, dtype=float)
    _check_unit_sum(u_day, "day membership")
    _check_unit_sum(u_ref, "centroid membership")
    if u_day.shape != u_ref.shape:
        raise LengthMismatchError(f"membership vectors of length {u_day.size} and {u_ref.size}")
    if c is not None and c != u_day.size:
        raise LengthMismatchError(f"expected {c} clusters, vectors have {u_day.size}")
    return float(min(1.0, np.abs(u_day - u_ref).sum() / 2.0))


def centroid_membership(model: ClusterModel, cluster: int) -> np.ndarray:
    """Membership of a centroid itself (one-hot by the singularity rule)."""
    return membership_of(model, model.centroids[cluster])


@dataclass(frozen=True)
class ExtraneousnessScore:
    day: date
    ei: float
    expected_cluster: str


@dataclass(frozen=True)
class AnomalyReport:
    day: date
    ei: float
    expected_cluster: str
    flagged: bool
    threshold: float

    def __post_init__(self):
        if self.flagged != (self.ei > self.threshold):
            raise InvalidParameterError(f"{self.day}: flagged must equal EI > threshold")


def _expected_index(names: Dict[int, str], cls: str) -> int:
    for k, name in names.items():
        if name == cls:
            return k
    raise InvalidParameterError(f"no cluster is named after class {cls!r}")


def score_days(model: ClusterModel, rows, days: Sequence[date], cluster_names: Dict[int, str],
               calendar: Callable[[date], str] = calendar_class) -> List[ExtraneousnessScore]:
    """EI of each day against the centroid of its calendar-expected cluster.

    Args:
        model: fitted cluster model
        rows: similarity rows of the days against the training days
        days: the days, aligned with ``rows``
        cluster_names: cluster index -> class name (see :func:`name_clusters`)
        calendar: rule giving each day's expected class

    Returns:
        One ExtraneousnessScore per day, in input order
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[0] != len(days):
        raise LengthMismatchError(f"{rows.shape[0]} rows for {len(days)} days")
    memberships = membership_of(model, rows)
    reference = {k: centroid_membership(model, k) for k in range(model.c)}
    scores = []
    for day, u in zip(days, memberships):
        cls = str(getattr(calendar(day), "value", calendar(day)))
        k = _expected_index(cluster_names, cls)
        scores.append(ExtraneousnessScore(day, extraneousness_index(u, reference[k], model.c), cls))
    return scores


def training_max_ei(scores: Iterable[ExtraneousnessScore]) -> float:
    values = [s.ei for s in scores]
    if not values:
        raise InvalidParameterError("training EI envelope needs at least one day")
    return float(max(values))


def classify_days(scores: Iterable[ExtraneousnessScore], training_max: float,
                  margin: float = 0.0) -> List[AnomalyReport]:
    """Every day as an AnomalyReport, by EI descending then date."""
    if margin < 0:
        raise InvalidParameterError(f"detection margin must be >= 0, got {margin}")
    threshold = training_max + margin
    reports = [AnomalyReport(s.day, s.ei, s.expected_cluster, s.ei > threshold, threshold) for s in scores]
    return sorted(reports, key=lambda r: (-r.ei, r.day))


def detect_unexpected(scores: Iterable[ExtraneousnessScore], training_max: float,
                      margin: float = 0.0) -> List[AnomalyReport]:
    """Days whose EI exceeds the training maximum (plus ``margin``), by EI descending then date."""
    flagged = [r for r in classify_days(scores, training_max, margin) if r.flagged]
    logger.info("flagged %d unexpected day(s) above EI %.4f", len(flagged), training_max + margin)
    return flagged


@dataclass(frozen=True)
class DetectionScore:
    recall: float
    false_positives: int
    true_positives: int


def evaluate_detection(flagged: Iterable, truth: Iterable[date]) -> DetectionScore:
    """Recall and false positives of flagged days (reports or dates) against known anomalies."""
    flagged_days = {f.day if isinstance(f, AnomalyReport) else f for f in flagged}
    truth = set(truth)
    hits = len(flagged_days & truth)
    recall = hits / len(truth) if truth else 1.0
    return DetectionScore(recall, len(flagged_days - truth), hits)
