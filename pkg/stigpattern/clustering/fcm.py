"""Fuzzy c-means over the rows of a similarity matrix."""

import logging
from dataclasses import dataclass, field
from datetime import date
from typing import List, Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.cluster import KMeans

from stigpattern.errors import InvalidParameterError, LengthMismatchError
from .similarity import SimilarityMatrix

logger = logging.getLogger(__name__)

SINGULAR_DISTANCE = 1e-12


@dataclass(frozen=True)
class ClusterModel:
    """Frozen FCM result: centroids in similarity space and training memberships."""

    centroids: np.ndarray = field(compare=False)
    m: float
    memberships: np.ndarray = field(compare=False)
    days: Tuple[date, ...] = ()
    objective_history: Tuple[float, ...] = ()

    @property
    def c(self) -> int:
        return int(self.centroids.shape[0])

    @property
    def n_iter(self) -> int:
        return max(len(self.objective_history) - 1, 0)

    def hard_labels(self) -> np.ndarray:
        return np.argmax(self.memberships, axis=1)


def fcm_memberships(features: np.ndarray, centroids: np.ndarray, m: float) -> np.ndarray:
    """``u_ik = 1 / sum_j (d_ik / d_ij)^(2/(m-1))``.

    A row at distance 0 from some centroids splits its membership equally
    among them and gets 0 elsewhere.
    """
    dist = cdist(np.atleast_2d(features), centroids)
    singular = dist <= SINGULAR_DISTANCE
    with np.errstate(divide="ignore", invalid="ignore"):
        inverse = np.where(singular, 0.0, dist) ** (-2.0 / (m - 1.0))
        u = inverse / inverse.sum(axis=1, keepdims=True)
    hit = singular.any(axis=1)
    if hit.any():
        u[hit] = singular[hit] / singular[hit].sum(axis=1, keepdims=True)
    return u


def fcm_centroids(features: np.ndarray, u: np.ndarray, m: float) -> np.ndarray:
    weights = u ** m
    return (weights.T @ features) / weights.sum(axis=0)[:, np.newaxis]


def fcm_objective(features: np.ndarray, u: np.ndarray, centroids: np.ndarray, m: float) -> float:
    return float(np.sum((u ** m) * cdist(features, centroids, "sqeuclidean")))


def fcm_fit(matrix: Union[SimilarityMatrix, np.ndarray], c: int = 3, m: float = 2.0, tol: float = 1e-6,
            max_iter: int = 300, seed: int = 0) -> ClusterModel:
    """Fuzzy c-means treating each day's similarity row as its feature vector.

    Centroids are seeded with k-means; the loop alternates centroid and
    membership updates until the objective changes by less than ``tol``.

    Args:
        matrix: similarity matrix (or any row-feature array)
        c: number of clusters
        m: fuzzifier, > 1
        tol: stopping threshold on the objective change
        max_iter: iteration cap
        seed: seed of the k-means initialization

    Returns:
        ClusterModel with the objective recorded per iteration
    """
    if isinstance(matrix, SimilarityMatrix):
        features, days = matrix.values, matrix.days
    else:
        features, days = np.asarray(matrix, dtype=float), ()
    if c < 2:
        raise InvalidParameterError(f"need c >= 2 clusters, got {c}")
    if not m > 1:
        raise InvalidParameterError(f"fuzzifier must be > 1, got {m}")
    if features.ndim != 2 or features.shape[0] < c:
        raise InvalidParameterError(f"need at least {c} rows to fit {c} clusters")

    seeds = KMeans(n_clusters=c, n_init=10, random_state=seed).fit(features).cluster_centers_
    u = fcm_memberships(features, seeds, m)
    centroids = seeds
    history: List[float] = [fcm_objective(features, u, centroids, m)]
    for _ in range(max_iter):
        centroids = fcm_centroids(features, u, m)
        u = fcm_memberships(features, centroids, m)
        history.append(fcm_objective(features, u, centroids, m))
        if abs(history[-2] - history[-1]) < tol:
            break
    logger.info("FCM: c=%d m=%.2f converged after %d iteration(s), objective %.6g",
                c, m, len(history) - 1, history[-1])
    return ClusterModel(centroids, float(m), u, tuple(days), tuple(history))


def membership_of(model: ClusterModel, day_row) -> np.ndarray:
    """Membership of a new day's similarity row against the frozen centroids."""
    row = np.asarray(day_row, dtype=float)
    if row.shape[-1] != model.centroids.shape[1]:
        raise LengthMismatchError(f"row has {row.shape[-1]} similarities, model expects {model.centroids.shape[1]}")
    u = fcm_memberships(row, model.centroids, model.m)
    return u[0] if row.ndim == 1 else u
