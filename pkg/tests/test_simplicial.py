import math

import numpy as np
import pytest
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import pdist, squareform

from pbif_homology.simplicial import PointCloud, betti_numbers, complex_at, rips_filtration, rips_persistence

UNIT_SQUARE = PointCloud([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
TRIANGLE = PointCloud([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])


def circle(n: int, radius: float = 1.0) -> PointCloud:
    t = 2 * np.pi * np.arange(n) / n
    return PointCloud(np.column_stack([radius * np.cos(t), radius * np.sin(t)]))


def test_single_point():
    filt = rips_filtration(PointCloud([[0.3, 0.4]]), r_max=1.0)
    assert filt.simplices == [(0,)]
    assert filt.values.tolist() == [0.0]


def test_equilateral_triangle_filtration():
    filt = rips_filtration(TRIANGLE, r_max=1.0 + 1e-9)
    assert np.bincount(filt.dims).tolist() == [3, 3, 1]
    assert filt.values[filt.dims > 0] == pytest.approx(1.0)


def test_unit_square_filtration():
    filt = rips_filtration(UNIT_SQUARE, r_max=2.0)
    edge_values = sorted(filt.values[filt.dims == 1].tolist())
    assert edge_values[:4] == [1.0, 1.0, 1.0, 1.0]
    assert edge_values[4:] == [math.sqrt(2)] * 2
    assert filt.values[filt.dims == 2].tolist() == [math.sqrt(2)] * 4
    assert np.all(np.diff(filt.values) >= 0)


def test_unit_square_has_one_loop():
    diag = rips_persistence(rips_filtration(UNIT_SQUARE, r_max=2.0))
    births, deaths = diag.in_dim(1)
    assert len(births) == 1
    assert births[0] == pytest.approx(1.0, abs=1e-12)
    assert deaths[0] == pytest.approx(math.sqrt(2), abs=1e-12)


def test_triangle_loop_is_born_and_filled_at_once():
    diag = rips_persistence(rips_filtration(TRIANGLE, r_max=1.5))
    assert len(diag.in_dim(1)[0]) == 0
    assert diag.essential(0) == 1
    finite = diag.finite_pairs(0)
    assert finite[:, 0].tolist() == [0.0, 0.0]
    assert finite[:, 1] == pytest.approx([1.0, 1.0])


def test_far_apart_points_never_merge():
    cloud = PointCloud(np.arange(5)[:, None] * np.array([[10.0, 0.0]]))
    diag = rips_persistence(rips_filtration(cloud, r_max=1.0))
    assert diag.essential(0) == 5
    assert len(diag) == 5


def test_complex_at_scale_zero_is_vertices_only():
    cx = complex_at(UNIT_SQUARE, 0.0)
    assert cx.edges == () and cx.triangles == ()
    assert betti_numbers(cx) == [4, 0]


def test_two_points_one_edge():
    cx = complex_at(PointCloud([[0.0, 0.0], [1.0, 0.0]]), 1.0)
    assert cx.edges == ((0, 1),)


def test_circle_has_one_component_and_one_loop():
    cloud = circle(20)
    chord = 2 * math.sin(math.pi / 20)
    cx = complex_at(cloud, 1.01 * chord)
    assert betti_numbers(cx) == [1, 1]


def test_boundary_maps_compose_to_zero(rng):
    cx = complex_at(PointCloud(rng.random((15, 2))), 0.45)
    d1, d2 = cx.boundary(1), cx.boundary(2)
    for col in d2.columns:
        touched = {}
        for e in col:
            for v in d1.columns[e]:
                touched[v] = touched.get(v, 0) ^ 1
        assert not any(touched.values())


@pytest.mark.parametrize("max_dim", [-1, 3])
def test_bad_max_dim(max_dim):
    with pytest.raises(ValueError):
        rips_filtration(UNIT_SQUARE, 1.0, max_dim)


def test_scaling_the_cloud_scales_the_diagram(rng):
    points = rng.uniform(size=(15, 2))
    base = rips_persistence(rips_filtration(PointCloud(points), r_max=0.6))
    scaled = rips_persistence(rips_filtration(PointCloud(2.5 * points), r_max=1.5))
    assert scaled.dims.tolist() == base.dims.tolist()
    assert scaled.births == pytest.approx(2.5 * base.births)
    assert scaled.deaths == pytest.approx(2.5 * base.deaths)


def test_every_point_starts_a_component(rng):
    cloud = PointCloud(rng.uniform(size=(25, 2)))
    diag = rips_persistence(rips_filtration(cloud, r_max=2.0, max_dim=1))
    births, _ = diag.in_dim(0)
    assert len(births) == len(cloud)
    assert diag.essential(0) == 1


@pytest.mark.parametrize("r", [0.05, 0.1, 0.2])
def test_components_match_the_union_of_balls(rng, r):
    points = rng.uniform(size=(40, 2))
    # r-balls meet exactly when their centres are within 2r
    touching = csr_matrix(squareform(pdist(points)) <= 2 * r)
    n_components, _ = connected_components(touching, directed=False)
    assert betti_numbers(complex_at(PointCloud(points), 2 * r, max_dim=1))[0] == n_components
