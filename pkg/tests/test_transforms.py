import numpy as np
import pytest

from stigpattern.errors import InvalidParameterError
from stigpattern.transforms import ClumpParams, SigmoidParams, clump, minmax_normalize, sigmoid, smooth


def test_sigmoid_examples():
    p = SigmoidParams(steepness=10.0, threshold=0.5)
    assert sigmoid(0.5, p) == 0.5
    assert sigmoid(0.8, p) == pytest.approx(0.95257, abs=1e-5)
    assert sigmoid(1e6, p) == 1.0
    assert sigmoid(-1e6, p) == 0.0


def test_smooth_applies_sigmoid_elementwise():
    p = SigmoidParams(10.0, 0.5)
    np.testing.assert_allclose(smooth([0.5, 0.8], p), [0.5, sigmoid(0.8, p)])


def test_clump_degenerate_is_single_sigmoid():
    p = ClumpParams(alpha=12.0, beta=0.4, gamma=12.0, lam=0.4)
    xs = np.linspace(0, 1, 11)
    np.testing.assert_allclose(clump(xs, p), sigmoid(xs, SigmoidParams(12.0, 0.4)))


def test_clump_plateaus():
    p = ClumpParams(alpha=80.0, beta=0.33, gamma=80.0, lam=0.66)
    assert clump(0.0, p) == pytest.approx(0.0, abs=1e-6)
    assert clump(0.5, p) == pytest.approx(0.5, abs=1e-6)
    assert clump(1.0, p) == pytest.approx(1.0, abs=1e-6)


def test_clump_is_monotone_and_bounded():
    rng = np.random.default_rng(3)
    xs = np.linspace(0, 1, 201)
    for _ in range(100):
        p = ClumpParams.sorted(rng.uniform(1, 100), rng.uniform(0, 1), rng.uniform(1, 100), rng.uniform(0, 1))
        values = clump(xs, p)
        assert np.all(np.diff(values) >= 0)
        assert values.min() >= 0 and values.max() <= 1


def test_clump_params_validation():
    with pytest.raises(InvalidParameterError):
        ClumpParams(alpha=10.0, beta=0.8, gamma=10.0, lam=0.2)
    with pytest.raises(InvalidParameterError):
        ClumpParams(alpha=0.0, beta=0.2, gamma=10.0, lam=0.8)
    p = ClumpParams.sorted(10.0, 0.8, 10.0, 0.2)
    assert (p.beta, p.lam) == (0.2, 0.8)


def test_minmax_examples():
    np.testing.assert_allclose(minmax_normalize([2, 4, 6]), [0.0, 0.5, 1.0])
    np.testing.assert_array_equal(minmax_normalize([5, 5, 5]), [0.0, 0.0, 0.0])
    np.testing.assert_array_equal(minmax_normalize([0, 1]), [0.0, 1.0])
    spanning = minmax_normalize([3.0, 1.0, 7.0, 2.0])
    np.testing.assert_allclose(minmax_normalize(spanning), spanning)
    with pytest.raises(InvalidParameterError):
        minmax_normalize([])
