"""Stigmergic Perceptron, activity levels and the day-similarity field."""

from .perceptron import StigmergicPerceptron, activity_level, characterize_day
from .day_similarity import (
    DAY_PARAM_BOUNDS,
    DAY_PARAM_NAMES,
    N_LEVELS,
    DaySimilarityParams,
    DaySimilaritySrf,
    LabeledPair,
    PairObjective,
    day_similarity,
    make_labeled_pairs,
    train_day_similarity,
    train_day_similarity_run,
)
from .training import TOTAL_KEY, build_training_sets, perceptron_detection_mse, train_perceptron
from .persistence import load_day_similarity, load_perceptron, save_day_similarity, save_perceptron

__all__ = [
    "StigmergicPerceptron",
    "activity_level",
    "characterize_day",
    "DAY_PARAM_BOUNDS",
    "DAY_PARAM_NAMES",
    "N_LEVELS",
    "DaySimilarityParams",
    "DaySimilaritySrf",
    "LabeledPair",
    "PairObjective",
    "day_similarity",
    "make_labeled_pairs",
    "train_day_similarity",
    "train_day_similarity_run",
    "TOTAL_KEY",
    "build_training_sets",
    "perceptron_detection_mse",
    "train_perceptron",
    "load_day_similarity",
    "load_perceptron",
    "save_day_similarity",
    "save_perceptron",
]
