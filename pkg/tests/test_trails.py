import math

import numpy as np
import pytest

from stigpattern.errors import (
    IncompatibleGridsError,
    InvalidMarkError,
    InvalidParameterError,
    UndefinedSimilarityError,
)
from stigpattern.trails import (
    Grid1D,
    Grid2D,
    Mark1D,
    Mark2D,
    Trail1D,
    Trail2D,
    cone_kernel,
    deposit,
    deposit_grid_aligned,
    evaporate,
    jaccard,
    jaccard_batch,
    matrix_to_pgm,
    trail_of_series,
    trail_to_csv,
    trail_to_pgm,
    trails_of_series_batch,
    trapezoid_profile,
)


@pytest.fixture
def grid10() -> Grid1D:
    return Grid1D(0.0, 1.0, 10)


def test_grid_rejects_bad_bounds():
    with pytest.raises(InvalidParameterError):
        Grid1D(1.0, 0.0, 10)
    with pytest.raises(InvalidParameterError):
        Grid1D(0.0, 1.0, 1)


def test_trapezoid_deposit_shape(grid10: Grid1D):
    # base 0.3 spans three cells; the top (0.15 wide) covers only the center cell
    trail = deposit(Trail1D.empty(grid10), Mark1D(center=0.45, width=0.3))
    assert trail.intensity[4] == pytest.approx(1.0)
    assert trail.intensity[3] == pytest.approx(2 / 3)
    assert trail.intensity[5] == pytest.approx(2 / 3)
    assert np.all(np.delete(trail.intensity, [3, 4, 5]) == 0)


def test_deposit_twice_is_double(grid10: Grid1D):
    mark = Mark1D(center=0.45, width=0.3)
    once = deposit(Trail1D.empty(grid10), mark)
    twice = deposit(once, mark)
    np.testing.assert_array_equal(twice.intensity, 2 * once.intensity)


def test_deposit_at_edge_is_clipped(grid10: Grid1D):
    mark = Mark1D(center=0.0, width=0.3)
    trail = deposit(Trail1D.empty(grid10), mark)
    in_bounds = trapezoid_profile(grid10.centers - 0.0, 0.3, 1.0).sum()
    # same spacing, extended past the lower edge
    extended = np.arange(-5, 10) * grid10.step + grid10.step / 2
    full = trapezoid_profile(extended, 0.3, 1.0).sum()
    assert trail.total == pytest.approx(in_bounds)
    assert trail.total < full


def test_invalid_marks_raise():
    with pytest.raises(InvalidMarkError):
        Mark1D(center=math.nan, width=0.1)
    with pytest.raises(InvalidMarkError):
        Mark1D(center=0.5, width=0.0)
    with pytest.raises(InvalidMarkError):
        Mark2D(0.0, 0.0, radius=math.inf, height=1.0)


def test_evaporate_examples():
    grid = Grid1D(0.0, 1.0, 3)
    trail = Trail1D(grid, [3.0, 1.0, 0.0])
    np.testing.assert_array_equal(evaporate(trail, 1.0).intensity, [2.0, 0.0, 0.0])
    assert evaporate(trail, 0.0) == trail
    zero = Trail1D.empty(grid)
    assert evaporate(zero, 0.7).is_zero()
    with pytest.raises(InvalidParameterError):
        evaporate(trail, -0.1)


def test_jaccard_examples():
    grid = Grid1D(0.0, 1.0, 3)
    a = Trail1D(grid, [1.0, 2.0, 0.0])
    b = Trail1D(grid, [1.0, 1.0, 1.0])
    assert jaccard(a, b) == pytest.approx(0.5)
    assert jaccard(a, a) == 1.0
    assert jaccard(Trail1D(grid, [1.0, 0.0, 0.0]), Trail1D(grid, [0.0, 0.0, 2.0])) == 0.0


def test_jaccard_errors():
    a = Trail1D(Grid1D(0.0, 1.0, 3), [1.0, 0.0, 0.0])
    b = Trail1D(Grid1D(0.0, 1.0, 4), [1.0, 0.0, 0.0, 0.0])
    with pytest.raises(IncompatibleGridsError):
        jaccard(a, b)
    zero = Trail1D.empty(a.grid)
    with pytest.raises(UndefinedSimilarityError):
        jaccard(zero, zero)


def test_jaccard_batch_marks_undefined_rows_as_nan():
    values = jaccard_batch(np.array([[0.0, 0.0], [1.0, 1.0]]), np.array([0.0, 0.0]))
    assert math.isnan(values[0])
    assert values[1] == 0.0


def test_trail_properties_on_random_trails():
    rng = np.random.default_rng(1234)
    grid = Grid1D(0.0, 1.0, 20)
    for _ in range(1000):
        a = rng.uniform(0, 3, 20) * (rng.random(20) < 0.6)
        b = rng.uniform(0, 3, 20) * (rng.random(20) < 0.6)
        a[0] += 0.1  # never all-zero
        ta, tb = Trail1D(grid, a), Trail1D(grid, b)
        s = jaccard(ta, tb)
        assert 0.0 <= s <= 1.0
        assert s == pytest.approx(jaccard(tb, ta))
        assert jaccard(ta, ta) == pytest.approx(1.0)
        k = rng.uniform(0.1, 10)
        assert jaccard(ta.scaled(k), tb.scaled(k)) == pytest.approx(s)

        d1, d2 = rng.uniform(0, 1.5, 2)
        np.testing.assert_allclose(evaporate(evaporate(ta, d1), d2).intensity,
                                   evaporate(ta, d1 + d2).intensity, atol=1e-12)
        assert np.all(evaporate(ta, d1).intensity >= 0)

        m1 = Mark1D(rng.uniform(0, 1), rng.uniform(0.02, 0.5), rng.uniform(0.1, 2))
        m2 = Mark1D(rng.uniform(0, 1), rng.uniform(0.02, 0.5), rng.uniform(0.1, 2))
        np.testing.assert_allclose(deposit(deposit(ta, m1), m2).intensity,
                                   deposit(deposit(ta, m2), m1).intensity)
        assert np.all(deposit(ta, m1).intensity >= ta.intensity)


def test_isolated_mark_decays_after_ceil_h_over_delta_steps():
    rng = np.random.default_rng(7)
    grid = Grid1D(0.0, 1.0, 100)
    for _ in range(200):
        # dyadic heights and rates keep the subtraction exact
        h = int(rng.integers(1, 64)) / 8
        delta = int(rng.integers(1, 32)) / 16
        trail = deposit(Trail1D.empty(grid), Mark1D(grid.centers[50], 0.2, h))
        assert trail.intensity.max() == h
        steps = math.ceil(h / delta)
        for _ in range(steps - 1):
            trail = evaporate(trail, delta)
        assert not trail.is_zero()
        assert evaporate(trail, delta).is_zero()


def test_trail_of_series_single_sample_is_the_mark(grid10: Grid1D):
    trail = trail_of_series([0.45], width=0.3, delta=0.5, grid=grid10)
    expected = deposit(Trail1D.empty(grid10), Mark1D(0.45, 0.3))
    np.testing.assert_allclose(trail.intensity, expected.intensity)


def test_trail_of_series_alternating_keeps_only_last_mark():
    grid = Grid1D()
    samples = [0.1, 0.9] * 5
    trail = trail_of_series(samples, width=0.1, delta=1.0, grid=grid)
    expected = deposit(Trail1D.empty(grid), Mark1D(0.9, 0.1))
    np.testing.assert_allclose(trail.intensity, expected.intensity)


def test_trail_of_series_constant_input_grows():
    grid = Grid1D()
    totals = [trail_of_series([0.5] * n, width=0.1, delta=0.05, grid=grid).total for n in range(1, 30)]
    assert all(later >= earlier for earlier, later in zip(totals, totals[1:]))


def test_batch_rows_match_single_series():
    grid = Grid1D()
    windows = np.random.default_rng(8).uniform(0.0, 1.0, (5, 24))
    batch = trails_of_series_batch(windows, width=0.2, delta=0.3, grid=grid)
    assert batch.shape == (5, grid.cells)
    for row, window in zip(batch, windows):
        np.testing.assert_allclose(row, trail_of_series(window, width=0.2, delta=0.3, grid=grid).intensity)


def test_trail_of_series_rejects_out_of_range():
    with pytest.raises(InvalidParameterError):
        trail_of_series([0.2, 1.5], width=0.1, delta=0.1)


def test_grid_aligned_deposit_matches_individual_cones():
    grid = Grid2D(0.0, 10.0, 0.0, 10.0, 10, 10)
    heights = np.zeros(grid.shape)
    heights[5, 5] = 1.0
    heights[2, 7] = 0.5
    heights[0, 0] = 2.0
    fast = deposit_grid_aligned(Trail2D.empty(grid), heights, 2.5)

    slow = Trail2D.empty(grid)
    for iy, ix in zip(*np.nonzero(heights)):
        x, y = grid.cell_center(ix, iy)
        slow = slow.deposit(Mark2D(x, y, 2.5, heights[iy, ix]))
    np.testing.assert_allclose(fast.intensity, slow.intensity, atol=1e-12)


def test_cone_kernel_peak_and_support():
    grid = Grid2D(0.0, 10.0, 0.0, 10.0, 10, 10)
    kernel = cone_kernel(grid, 2.0)
    assert kernel.shape == (5, 5)
    assert kernel[2, 2] == 1.0
    assert kernel[0, 2] == 0.0  # distance equals the base radius


def test_grid_cell_boundary_goes_to_lower_cell():
    grid = Grid2D(0.0, 10.0, 0.0, 10.0, 10, 10)
    ix, iy = grid.cell_index([1.0, 0.0, 10.0], [2.0, 0.0, 10.0])
    assert list(ix) == [0, 0, 9]
    assert list(iy) == [1, 0, 9]


def test_pgm_export(tmp_path):
    path = matrix_to_pgm(np.array([[0.0, 1.0], [2.0, 4.0]]), tmp_path / "m.pgm")
    lines = path.read_text().splitlines()
    assert lines[:3] == ["P2", "2 2", "255"]
    assert lines[3].split() == ["0", "64"]
    assert lines[4].split() == ["128", "255"]

    grid = Grid2D(0.0, 2.0, 0.0, 2.0, 2, 2)
    zero = trail_to_pgm(Trail2D.empty(grid), tmp_path / "zero.pgm")
    assert zero.read_text().splitlines()[3:] == ["0 0", "0 0"]


def test_csv_export(tmp_path, grid10: Grid1D):
    trail = trail_of_series([0.45], width=0.3, delta=0.1, grid=grid10)
    lines = trail_to_csv(trail, tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "value,intensity"
    assert len(lines) == 11
