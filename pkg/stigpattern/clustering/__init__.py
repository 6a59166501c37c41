"""Day similarity matrices, fuzzy clustering and unexpected-day detection."""

from .similarity import SimilarityMatrix, build_similarity_matrix, similarity_rows
from .fcm import ClusterModel, fcm_centroids, fcm_fit, fcm_memberships, fcm_objective, membership_of
from .anomaly import (
    AnomalyReport,
    DayClass,
    DetectionScore,
    ExtraneousnessScore,
    calendar_class,
    centroid_membership,
    classify_days,
    detect_unexpected,
    evaluate_detection,
    extraneousness_index,
    name_clusters,
    score_days,
    training_max_ei,
)

__all__ = [
    "SimilarityMatrix",
    "build_similarity_matrix",
    "similarity_rows",
    "ClusterModel",
    "fcm_centroids",
    "fcm_fit",
    "fcm_memberships",
    "fcm_objective",
    "membership_of",
    "AnomalyReport",
    "DayClass",
    "DetectionScore",
    "ExtraneousnessScore",
    "calendar_class",
    "centroid_membership",
    "classify_days",
    "detect_unexpected",
    "evaluate_detection",
    "extraneousness_index",
    "name_clusters",
    "score_days",
    "training_max_ei",
]
