import numpy as np
import pytest

from stigpattern.errors import InvalidParameterError, LengthMismatchError
from stigpattern.srf import (
    ARCHETYPE_NAMES,
    Srf,
    SrfParams,
    archetype_by_name,
    default_archetypes,
    default_srf_params,
    rebuild_archetype_trail,
    srf_similarity,
    with_evaporation,
)
from stigpattern.trails import trapezoid_profile
from stigpattern.transforms import clump, sigmoid


@pytest.fixture
def archetypes():
    return default_archetypes()


def _srf(name, archetypes, params=None) -> Srf:
    return Srf(params or default_srf_params(), archetype_by_name(name, archetypes))


def test_archetypes_are_rank_ordered(archetypes):
    assert [a.rank for a in archetypes] == list(range(1, 8))
    assert [a.name for a in archetypes] == list(ARCHETYPE_NAMES)
    assert archetype_by_name("rushhour", archetypes).template[0] == pytest.approx(0.9)
    assert all(a.length == 72 for a in archetypes)


def test_archetype_overrides_and_errors():
    custom = np.full(72, 0.3)
    bank = default_archetypes(overrides={"Flow": custom})
    np.testing.assert_array_equal(archetype_by_name("Flow", bank).template, custom)
    with pytest.raises(InvalidParameterError):
        default_archetypes(overrides={"Nap": custom})
    with pytest.raises(InvalidParameterError):
        default_archetypes(overrides={"Flow": np.full(10, 0.3)})
    with pytest.raises(InvalidParameterError):
        archetype_by_name("Nap", bank)


def test_resampled_keeps_the_shape(archetypes):
    falling = archetype_by_name("Falling", archetypes)
    short = falling.resampled(12)
    assert short.shape == (12,)
    assert short[0] == pytest.approx(falling.template[0])
    assert short[-1] == pytest.approx(falling.template[-1])
    assert np.all(np.diff(short) <= 0)
    np.testing.assert_array_equal(falling.resampled(72), falling.template)
    with pytest.raises(InvalidParameterError):
        falling.resampled(0)


def test_self_match_scores_sigmoid_of_one(archetypes):
    params = default_srf_params()
    for archetype in archetypes:
        srf = Srf(params, archetype)
        assert srf_similarity(srf, archetype.template) == pytest.approx(sigmoid(1.0, params.activation))


def test_disjoint_window_scores_sigmoid_of_zero(archetypes):
    srf = _srf("Asleep", archetypes)
    score = srf_similarity(srf, np.full(72, 0.9))
    assert score == pytest.approx(sigmoid(0.0, srf.params.activation))
    assert score < 1e-6


def test_self_match_is_maximal(archetypes):
    rng = np.random.default_rng(11)
    for archetype in archetypes:
        srf = Srf(default_srf_params(), archetype)
        best = srf_similarity(srf, archetype.template)
        for _ in range(10):
            assert srf_similarity(srf, rng.uniform(0, 1, 72)) <= best + 1e-12


def test_scores_stay_in_open_unit_interval(archetypes):
    windows = np.random.default_rng(5).uniform(0, 1, (50, 72))
    for archetype in archetypes:
        scores = Srf(default_srf_params(), archetype).scores(windows)
        assert np.all((scores > 0) & (scores < 1))


def test_scoring_is_deterministic(archetypes):
    srf = _srf("Rise", archetypes)
    window = np.linspace(0.4, 0.8, 72)
    assert srf_similarity(srf, window) == srf_similarity(srf, window)


def test_micro_fluctuations_barely_move_the_score(archetypes):
    params = default_srf_params()
    rng = np.random.default_rng(21)
    amplitude = params.mark_width / 4 * 0.8
    for name in ("Asleep", "Flow", "RushHour"):
        srf = _srf(name, archetypes, params)
        clean = srf_similarity(srf, srf.archetype.template)
        noisy = [
            srf_similarity(srf, np.clip(srf.archetype.template + rng.uniform(-amplitude, amplitude, 72), 0, 1))
            for _ in range(20)
        ]
        assert clean - np.mean(noisy) <= 0.1


def test_length_mismatch_raises(archetypes):
    srf = _srf("Flow", archetypes)
    with pytest.raises(LengthMismatchError):
        srf_similarity(srf, np.full(10, 0.5))


def test_rebuild_is_idempotent(archetypes):
    srf = _srf("Chill", archetypes)
    once = rebuild_archetype_trail(srf)
    twice = rebuild_archetype_trail(once)
    assert once.archetype_trail == twice.archetype_trail == srf.archetype_trail


def test_rebuild_with_wider_marks_widens_support(archetypes):
    srf = _srf("Asleep", archetypes)
    narrow = rebuild_archetype_trail(srf, SrfParams.from_dict({**srf.params.to_dict(), "mark_width": 0.1}))
    wide = rebuild_archetype_trail(srf, SrfParams.from_dict({**srf.params.to_dict(), "mark_width": 0.3}))
    assert np.count_nonzero(wide.archetype_trail.intensity) > np.count_nonzero(narrow.archetype_trail.intensity)


def test_rebuild_without_evaporation_sums_every_mark(archetypes):
    srf = _srf("Awakening", archetypes)
    params = with_evaporation(srf.params, 0.0)
    rebuilt = rebuild_archetype_trail(srf, params)
    centers = srf.grid.centers
    clumped = clump(srf.archetype.template, params.clump)
    expected = sum(trapezoid_profile(centers - c, params.mark_width, 1.0) for c in clumped)
    np.testing.assert_allclose(rebuilt.archetype_trail.intensity, expected)


def test_params_vector_round_trip_sorts_thresholds():
    params = default_srf_params()
    assert SrfParams.from_vector(params.to_vector()) == params
    swapped = params.to_vector()
    swapped[1], swapped[3] = 0.9, 0.1
    decoded = SrfParams.from_vector(swapped)
    assert decoded.clump.beta == 0.1 and decoded.clump.lam == 0.9
    with pytest.raises(InvalidParameterError):
        SrfParams.from_vector([1.0, 2.0])

