import numpy as np
import pytest
from scipy.stats import norm

from pbif_homology.cubical import Window, grid_centers
from pbif_homology.errors import DegenerateDataError
from pbif_homology.kde import fit_kde, kde_evaluate, kde_on_grid, scott_bandwidth
from pbif_homology.simplicial import PointCloud
from pbif_homology.stochastic import SimulationConfig, duffing_system, simulate_stationary


def direct_kde(samples: np.ndarray, bw: np.ndarray, query: np.ndarray) -> np.ndarray:
    z = (query[:, None, :] - samples[None, :, :]) / bw
    return np.mean(np.prod(norm.pdf(z) / bw, axis=2), axis=1)


def test_scott_bandwidth(rng):
    points = rng.normal(size=(400, 2)) * [1.0, 3.0]
    bw = scott_bandwidth(PointCloud(points))
    expected = 400 ** (-1 / 6) * points.std(axis=0, ddof=1)
    assert bw == pytest.approx(expected)


def test_degenerate_samples():
    with pytest.raises(DegenerateDataError):
        scott_bandwidth(PointCloud([[0.0, 1.0]]))
    with pytest.raises(DegenerateDataError):
        scott_bandwidth(PointCloud([[0.0, 1.0], [2.0, 1.0], [3.0, 1.0]]))


def test_matches_direct_sum(rng):
    samples = rng.normal(size=(60, 2))
    model = fit_kde(PointCloud(samples), [0.3, 0.7])
    query = rng.normal(size=(25, 2))
    assert kde_evaluate(model, query) == pytest.approx(direct_kde(samples, model.bandwidths, query), rel=1e-8)


def test_integrates_to_one(rng):
    model = fit_kde(PointCloud(rng.normal(size=(200, 2))))
    field = kde_on_grid(model, Window(-6, 6, -6, 6), 121, 121)
    assert field.values.sum() * field.dx * field.dy == pytest.approx(1.0, abs=1e-3)


def test_single_point_kernel():
    model = fit_kde(PointCloud([[0.0, 0.0]]), [1.0, 2.0])
    assert kde_evaluate(model, [[0.0, 0.0]])[0] == pytest.approx(1 / (2 * np.pi * 2.0))
    assert model.scalar_bandwidth == pytest.approx(np.sqrt(2.0))


def test_normalized_grid(rng):
    model = fit_kde(PointCloud(rng.normal(size=(100, 2))))
    field = kde_on_grid(model, Window(-3, 3, -3, 3), 31, 31, normalize=True)
    assert field.values.max() == 1.0
    assert field.values.shape == (31, 31)


def test_bad_bandwidths(rng):
    cloud = PointCloud(rng.normal(size=(10, 2)))
    with pytest.raises(ValueError):
        fit_kde(cloud, [0.1])
    with pytest.raises(ValueError):
        fit_kde(cloud, [0.1, -1.0])


def test_point_symmetric_samples_give_a_symmetric_field(rng):
    half = rng.normal(size=(80, 2)) * [1.0, 0.5] + [0.7, 0.2]
    model = fit_kde(PointCloud(np.vstack([half, -half])))
    values = kde_on_grid(model, Window(-3, 3, -3, 3), 41, 41).values
    assert values == pytest.approx(values[::-1, ::-1], rel=1e-9)


def test_sample_order_does_not_matter(rng):
    samples = rng.normal(size=(150, 2))
    query = rng.normal(size=(30, 2))
    shuffled = samples[rng.permutation(len(samples))]
    assert kde_evaluate(fit_kde(PointCloud(shuffled)), query) == pytest.approx(
        kde_evaluate(fit_kde(PointCloud(samples)), query), rel=1e-9
    )


def test_small_moves_give_small_changes(rng):
    samples = rng.normal(size=(150, 2))
    query = rng.normal(size=(30, 2))
    bw = scott_bandwidth(PointCloud(samples))
    base = kde_evaluate(fit_kde(PointCloud(samples), bw), query)
    moved = kde_evaluate(fit_kde(PointCloud(samples + 1e-6 * rng.normal(size=samples.shape)), bw), query)
    assert np.max(np.abs(moved - base)) < 1e-4 * base.max()


def test_double_well_samples_give_two_peaks():
    cloud = simulate_stationary(duffing_system(-1.0), SimulationConfig(), seed=2)
    field = kde_on_grid(fit_kde(cloud), Window(-3, 3, -3, 3), 121, 121)
    x1, x2 = np.meshgrid(grid_centers(-3, 3, 121), grid_centers(-3, 3, 121))
    for side in (x1 < 0, x1 > 0):
        peak = np.argmax(np.where(side, field.values, -np.inf))
        assert abs(abs(x1.flat[peak]) - 1.0) < 0.2
        assert abs(x2.flat[peak]) < 0.2
        # a separate maximum, not the shoulder of one central peak
        assert field.values.flat[peak] > field.values[60, 60]
