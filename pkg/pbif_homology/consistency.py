"""
Topologically consistent Betti estimation from samples.

The superlevel set {p >= L} is approximated by the union of r-balls around
the sample points whose estimated density is at least L. Two such unions,
at L + eps and L - eps, are compared through the map their inclusion induces
on homology; its rank is the estimate of beta_p at level L.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .config import EPSILON, R_BOUNDS, SUBSAMPLE_SIZE
from .cubical import BettiVector
from .errors import UnsupportedDimensionError
from .kde import KdeModel, fit_kde, kde_evaluate
from .simplicial import PointCloud, SimplicialComplex, complex_at
from .stochastic import greedy_permutation
from .utils import log
from .z2core import Z2Matrix, cycle_basis, image_rank


@dataclass(frozen=True)
class EstimatorConfig:
    r: float
    level: float = 0.5
    dim: int = 0
    epsilon: float = EPSILON
    n: int = SUBSAMPLE_SIZE

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r}")

    def check_guidance(self, n_points: int, d: int = 2):
        """Log when r strays from the ranges the estimator is known to behave in."""
        lo, hi = R_BOUNDS
        if not lo <= self.r <= hi:
            log(f"r={self.r:.4g} outside the recommended [{lo}, {hi}]", logging.WARNING)
        if n_points > 1 and n_points * self.r ** d <= np.log(n_points):
            log(f"n*r^d = {n_points * self.r ** d:.3g} <= log n = {np.log(n_points):.3g}; r is likely too small", logging.WARNING)


def default_radius(kde: KdeModel) -> float:
    lo, hi = R_BOUNDS
    return float(np.clip(kde.scalar_bandwidth, lo, hi))


def normalized_densities(samples: PointCloud, kde: KdeModel) -> np.ndarray:
    """p_hat at the samples, divided by its maximum over them."""
    dens = kde_evaluate(kde, samples.points)
    peak = dens.max() if dens.size else 0.0
    return dens / peak if peak > 0 else dens


def superlevel_points(samples: PointCloud, densities: np.ndarray, L: float) -> np.ndarray:
    densities = np.asarray(densities, dtype=float)
    if densities.shape != (len(samples),):
        raise ValueError(f"{densities.size} densities for {len(samples)} samples")
    return np.flatnonzero(densities >= L)


def h0_image_rank_unionfind(a_indices: Sequence[int], b_complex: SimplicialComplex) -> int:
    """Number of components of B that contain at least one vertex of A."""
    a_indices = np.asarray(a_indices, dtype=int)
    if a_indices.size == 0 or b_complex.n_vertices == 0:
        return 0
    n = b_complex.n_vertices
    edges = np.array(b_complex.edges, dtype=int).reshape(-1, 2)
    graph = coo_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    return int(np.unique(labels[a_indices]).size)


def _cycles_of_a_in_b(a_local: np.ndarray, b_complex: SimplicialComplex, p: int) -> Z2Matrix:
    """A basis of Z_p(A), written in B's p-cells. A is the full subcomplex of B on a_local."""
    if p == 0:
        return Z2Matrix.identity_columns(b_complex.n_vertices, a_local.tolist())
    in_a = np.zeros(b_complex.n_vertices, dtype=bool)
    in_a[a_local] = True
    a_edges = [k for k, (i, j) in enumerate(b_complex.edges) if in_a[i] and in_a[j]]
    d1 = b_complex.boundary(1).select(a_edges)
    kernel = cycle_basis(d1)
    columns = (tuple(a_edges[m] for m in chain) for chain in kernel.columns)
    return Z2Matrix.from_columns(len(b_complex.edges), columns, check=False)


def estimate_betti(
    samples: PointCloud,
    kde: KdeModel,
    cfg: EstimatorConfig,
    densities: Optional[np.ndarray] = None,
    method: str = "linalg",
) -> int:
    """
    Rank of H_p(A) -> H_p(B), where A and B are Rips complexes at edge length
    2r on the points with normalized p_hat >= L + eps and >= L - eps.
    """
    p = cfg.dim
    if p not in (0, 1):
        raise UnsupportedDimensionError(f"only beta_0 and beta_1 can be estimated, got p={p}")
    if densities is None:
        densities = normalized_densities(samples, kde)

    upper = superlevel_points(samples, densities, cfg.level + cfg.epsilon)
    if upper.size == 0:
        return 0
    lower = superlevel_points(samples, densities, cfg.level - cfg.epsilon)
    b_complex = complex_at(samples.subset(lower), 2.0 * cfg.r, max_dim=p + 1)
    # both index sets are ascending, so A's vertices sit at these positions in B
    a_local = np.searchsorted(lower, upper)

    if p == 0 and method == "unionfind":
        return h0_image_rank_unionfind(a_local, b_complex)
    if method not in ("linalg", "unionfind"):
        raise ValueError(f"unknown method {method!r}")
    cycles = _cycles_of_a_in_b(a_local, b_complex, p)
    return image_rank(cycles, b_complex.boundary(p + 1))


def estimated_betti_vector(
    samples: PointCloud,
    kde: KdeModel,
    levels: Sequence[float],
    r: float,
    epsilon: float = EPSILON,
    p: int = 0,
    densities: Optional[np.ndarray] = None,
    method: str = "linalg",
) -> BettiVector:
    levels = np.asarray(levels, dtype=float)
    if densities is None:
        densities = normalized_densities(samples, kde)
    counts = [
        estimate_betti(samples, kde, EstimatorConfig(r=r, level=float(L), dim=p, epsilon=epsilon), densities, method)
        for L in levels
    ]
    return BettiVector(p, levels, np.array(counts, dtype=int))


def betti_from_sample(
    sample: PointCloud,
    levels: Sequence[float],
    dims: Sequence[int] = (0, 1),
    r: Optional[float] = None,
    epsilon: float = EPSILON,
    n: int = SUBSAMPLE_SIZE,
    method: str = "linalg",
) -> List[BettiVector]:
    """
    Full estimation from a stationary sample: p_hat is fit on all of it, the
    estimator runs on its first n greedy-permuted points.
    """
    kde = fit_kde(sample)
    points = greedy_permutation(sample, n)
    radius = default_radius(kde) if r is None else float(r)
    EstimatorConfig(r=radius, epsilon=epsilon, n=n).check_guidance(len(points), points.dim)
    densities = normalized_densities(points, kde)
    return [estimated_betti_vector(points, kde, levels, radius, epsilon, p, densities, method) for p in dims]
