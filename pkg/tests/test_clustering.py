from datetime import date, timedelta

import numpy as np
import pytest

from stigpattern.clustering import (
    AnomalyReport,
    ClusterModel,
    DayClass,
    ExtraneousnessScore,
    build_similarity_matrix,
    calendar_class,
    centroid_membership,
    classify_days,
    detect_unexpected,
    evaluate_detection,
    extraneousness_index,
    fcm_fit,
    fcm_memberships,
    membership_of,
    name_clusters,
    score_days,
    similarity_rows,
    training_max_ei,
)
from stigpattern.errors import InvalidParameterError, LengthMismatchError
from stigpattern.perceptron import DaySimilaritySrf, day_similarity
from stigpattern.series import ActivityLevelSeries

MONDAY = date(2015, 2, 2)

PROFILES = {
    DayClass.WORKING: [3.0, 4.0, 4.0, 4.0, 4.0, 4.0, 3.0],
    DayClass.ENTERTAINMENT: [5.5, 5.5, 6.5, 6.5, 6.5, 6.5, 5.5],
    DayClass.LEISURE: [1.0, 1.0, 2.0, 2.0, 2.0, 1.0, 1.0],
}


def _week_levels(start: date, days: int, seed: int, swap=None):
    """Level series following each day's calendar profile, with small noise."""
    rng = np.random.default_rng(seed)
    swap = swap or {}
    out = []
    for i in range(days):
        day = start + timedelta(days=i)
        profile = np.array(PROFILES[swap.get(day, calendar_class(day))])
        out.append(ActivityLevelSeries(day, np.clip(profile + rng.uniform(-0.01, 0.01, 7), 1, 7)))
    return out


@pytest.fixture(scope="module")
def dsrf() -> DaySimilaritySrf:
    return DaySimilaritySrf()


@pytest.fixture
def groups() -> np.ndarray:
    rng = np.random.default_rng(0)
    centers = np.array([[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]])
    return np.vstack([c + rng.normal(0, 0.5, (15, 2)) for c in centers])


def test_similarity_matrix_is_symmetric_with_unit_diagonal(dsrf):
    series = _week_levels(MONDAY, 7, seed=1)
    matrix = build_similarity_matrix(series, dsrf)
    assert matrix.size == 7
    np.testing.assert_allclose(matrix.values, matrix.values.T)
    np.testing.assert_array_equal(np.diag(matrix.values), np.ones(7))
    assert matrix.values[0, 1] == pytest.approx(day_similarity(dsrf, series[0].levels, series[1].levels))
    assert np.all((matrix.values >= 0) & (matrix.values <= 1))


def test_same_class_days_are_more_similar(dsrf):
    series = _week_levels(MONDAY, 7, seed=2)
    matrix = build_similarity_matrix(series, dsrf)
    # Monday-Tuesday are both Working, Monday-Sunday are not
    assert matrix.values[0, 1] > 0.9
    assert matrix.values[0, 6] < 0.1


def test_similarity_matrix_needs_two_days(dsrf):
    with pytest.raises(InvalidParameterError):
        build_similarity_matrix(_week_levels(MONDAY, 1, seed=0), dsrf)
    mixed = [ActivityLevelSeries(MONDAY, np.full(7, 3.0)), ActivityLevelSeries(MONDAY, np.full(4, 3.0))]
    with pytest.raises(LengthMismatchError):
        build_similarity_matrix(mixed, dsrf)


def test_similarity_rows_against_training_days(dsrf):
    training = _week_levels(MONDAY, 7, seed=3)
    matrix = build_similarity_matrix(training, dsrf)
    rows = similarity_rows(training[:2], training, dsrf)
    np.testing.assert_allclose(rows, matrix.values[:2])


def test_fcm_memberships_sum_to_one_and_objective_decreases(groups):
    model = fcm_fit(groups, c=3, seed=1)
    np.testing.assert_allclose(model.memberships.sum(axis=1), 1.0)
    assert np.all(model.memberships >= 0)
    history = model.objective_history
    assert all(b <= a + 1e-9 for a, b in zip(history, history[1:]))
    assert model.n_iter >= 1


def test_fcm_is_seeded(groups):
    first = fcm_fit(groups, c=3, seed=5)
    second = fcm_fit(groups, c=3, seed=5)
    np.testing.assert_array_equal(first.memberships, second.memberships)
    assert first.objective_history == second.objective_history


def test_fcm_recovers_separated_groups(groups):
    model = fcm_fit(groups, c=3, seed=0)
    assert np.all(model.memberships.max(axis=1) >= 0.8)
    labels = model.hard_labels()
    for g in range(3):
        assert len(set(labels[g * 15:(g + 1) * 15])) == 1
    assert len(set(labels)) == 3


def test_membership_singularity_and_equidistance():
    centroids = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 0.0]])
    np.testing.assert_allclose(fcm_memberships(np.array([[0.0, 0.0]]), centroids, 2.0), [[0.5, 0.0, 0.5]])
    ring = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]])
    np.testing.assert_allclose(fcm_memberships(np.zeros((1, 2)), ring, 2.0), [[1 / 3] * 3])


def test_fcm_validation(groups):
    with pytest.raises(InvalidParameterError):
        fcm_fit(groups, c=1)
    with pytest.raises(InvalidParameterError):
        fcm_fit(groups, c=3, m=1.0)
    with pytest.raises(InvalidParameterError):
        fcm_fit(groups[:2], c=3)
    model = fcm_fit(groups, c=3)
    with pytest.raises(LengthMismatchError):
        membership_of(model, [0.0, 0.0, 0.0])


def test_centroid_membership_is_one_hot(groups):
    model = fcm_fit(groups, c=3)
    for k in range(3):
        np.testing.assert_array_equal(centroid_membership(model, k), np.eye(3)[k])


def test_extraneousness_examples():
    assert extraneousness_index([1, 0, 0], [1, 0, 0]) == 0.0
    assert extraneousness_index([1, 0, 0], [0, 1, 0]) == 1.0
    assert extraneousness_index([0.9, 0.1, 0.0], [1, 0, 0]) == pytest.approx(0.1)


def test_extraneousness_range_and_permutation():
    rng = np.random.default_rng(10)
    for _ in range(10_000):
        u, v = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
        ei = extraneousness_index(u, v)
        assert 0.0 <= ei <= 1.0
    order = np.array([2, 0, 3, 1])
    assert extraneousness_index(u[order], v[order]) == pytest.approx(ei)


def test_extraneousness_rejects_bad_vectors():
    with pytest.raises(InvalidParameterError):
        extraneousness_index([0.5, 0.6, 0.0], [1, 0, 0])
    with pytest.raises(LengthMismatchError):
        extraneousness_index([1.0, 0.0], [1.0, 0.0, 0.0])
    with pytest.raises(LengthMismatchError):
        extraneousness_index([1.0, 0.0], [1.0, 0.0], c=3)


def test_calendar_classes():
    week = [calendar_class(MONDAY + timedelta(days=i)) for i in range(7)]
    assert week == [DayClass.WORKING] * 4 + [DayClass.ENTERTAINMENT] * 2 + [DayClass.LEISURE]


def test_name_clusters_by_agreement():
    memberships = np.array([[0.1, 0.8, 0.1], [0.2, 0.7, 0.1], [0.9, 0.05, 0.05], [0.1, 0.1, 0.8]])
    model = ClusterModel(np.eye(3), 2.0, memberships)
    classes = [DayClass.WORKING, DayClass.WORKING, DayClass.LEISURE, DayClass.ENTERTAINMENT]
    assert name_clusters(model, classes) == {0: "Leisure", 1: "Working", 2: "Entertainment"}
    assert name_clusters(model, ["Working"] * 4)[1] == "Working"
    with pytest.raises(LengthMismatchError):
        name_clusters(model, classes[:2])


def test_classify_orders_by_ei_then_date():
    days = [MONDAY + timedelta(days=i) for i in range(4)]
    scores = [ExtraneousnessScore(days[0], 0.2, "Working"), ExtraneousnessScore(days[1], 0.7, "Working"),
              ExtraneousnessScore(days[2], 0.2, "Working"), ExtraneousnessScore(days[3], 0.05, "Working")]
    reports = classify_days(scores, training_max=0.1)
    assert [r.day for r in reports] == [days[1], days[0], days[2], days[3]]
    assert [r.flagged for r in reports] == [True, True, True, False]
    assert [r.day for r in detect_unexpected(scores, 0.1, margin=0.15)] == [days[1]]
    assert training_max_ei(scores) == 0.7
    with pytest.raises(InvalidParameterError):
        classify_days(scores, 0.1, margin=-0.1)
    with pytest.raises(InvalidParameterError):
        training_max_ei([])


def test_report_flag_must_match_threshold():
    with pytest.raises(InvalidParameterError):
        AnomalyReport(MONDAY, 0.3, "Working", flagged=False, threshold=0.2)
    assert AnomalyReport(MONDAY, 0.2, "Working", flagged=False, threshold=0.2).ei == 0.2


def test_evaluate_detection():
    truth = [date(2015, 2, 25), date(2015, 2, 28)]
    score = evaluate_detection([date(2015, 2, 25), date(2015, 2, 26)], truth)
    assert score.recall == 0.5
    assert score.true_positives == 1
    assert score.false_positives == 1
    assert evaluate_detection([], []).recall == 1.0

    reports = [AnomalyReport(date(2015, 2, 28), 0.7, "Entertainment", flagged=True, threshold=0.4),
               AnomalyReport(date(2015, 2, 26), 0.5, "Working", flagged=True, threshold=0.4)]
    mixed = evaluate_detection([*reports, date(2015, 2, 25)], truth)
    assert (mixed.recall, mixed.true_positives, mixed.false_positives) == (1.0, 2, 1)


def test_leisure_wednesday_is_flagged(dsrf):
    anomaly = date(2015, 2, 25)
    training = _week_levels(MONDAY, 21, seed=4)
    evaluation = _week_levels(date(2015, 2, 23), 7, seed=5, swap={anomaly: DayClass.LEISURE})

    matrix = build_similarity_matrix(training, dsrf)
    model = fcm_fit(matrix, c=3, seed=0)
    names = name_clusters(model, [calendar_class(s.day) for s in training])
    assert sorted(names.values()) == ["Entertainment", "Leisure", "Working"]

    threshold = training_max_ei(score_days(model, matrix.values, matrix.days, names))
    rows = similarity_rows(evaluation, training, dsrf)
    scores = score_days(model, rows, [s.day for s in evaluation], names)
    flagged = detect_unexpected(scores, threshold, margin=0.05)
    assert [r.day for r in flagged] == [anomaly]
    assert flagged[0].expected_cluster == "Working"
    assert flagged[0].ei > 0.5
