"""
Gaussian kernel density estimation with a diagonal (per-dimension) bandwidth.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.neighbors import KernelDensity

from .config import GRID_SIZE
from .cubical import ScalarField2D, Window, grid_centers
from .densities import normalize_max
from .errors import DegenerateDataError
from .simplicial import PointCloud


@dataclass(frozen=True, eq=False)
class KdeModel:
    samples: PointCloud
    bandwidths: np.ndarray

    def __post_init__(self):
        bandwidths = np.asarray(self.bandwidths, dtype=float).reshape(-1)
        if len(self.samples) < 1:
            raise ValueError("a KDE needs at least one sample")
        if bandwidths.shape != (self.samples.dim,):
            raise ValueError(f"expected {self.samples.dim} bandwidths, got {bandwidths.size}")
        if not np.all(bandwidths > 0):
            raise ValueError(f"bandwidths must be positive, got {bandwidths}")
        object.__setattr__(self, "bandwidths", bandwidths)
        # fit in whitened coordinates so one isotropic unit kernel serves every axis
        estimator = KernelDensity(kernel="gaussian", bandwidth=1.0)
        estimator.fit(self.samples.points / bandwidths)
        object.__setattr__(self, "_estimator", estimator)

    @property
    def scalar_bandwidth(self) -> float:
        """Geometric mean of the per-dimension bandwidths."""
        return float(np.exp(np.mean(np.log(self.bandwidths))))


def scott_bandwidth(cloud: PointCloud) -> np.ndarray:
    """h_i = n^(-1/(d+4)) * s_i"""
    n, d = len(cloud), cloud.dim
    if n < 2:
        raise DegenerateDataError(f"Scott's rule needs at least 2 samples, got {n}")
    std = np.std(cloud.points, axis=0, ddof=1)
    if np.any(std <= 0):
        raise DegenerateDataError(f"zero variance along dimension(s) {np.flatnonzero(std <= 0).tolist()}")
    return n ** (-1.0 / (d + 4)) * std


def fit_kde(cloud: PointCloud, bandwidths=None) -> KdeModel:
    if bandwidths is None:
        bandwidths = scott_bandwidth(cloud)
    return KdeModel(cloud, np.asarray(bandwidths, dtype=float))


def kde_evaluate(model: KdeModel, query) -> np.ndarray:
    query = np.asarray(query, dtype=float).reshape(-1, model.samples.dim)
    if query.shape[0] == 0:
        return np.zeros(0)
    log_density = model._estimator.score_samples(query / model.bandwidths)
    return np.exp(log_density) / np.prod(model.bandwidths)


def kde_on_grid(
    model: KdeModel,
    window: Window,
    nx: int = GRID_SIZE,
    ny: int = GRID_SIZE,
    normalize: bool = False,
) -> ScalarField2D:
    if model.samples.dim != 2:
        raise ValueError("grid evaluation needs a 2D model")
    if nx < 2 or ny < 2:
        raise ValueError(f"grid needs at least 2x2 cells, got {nx}x{ny}")
    dx = (window.x_max - window.x_min) / nx
    dy = (window.y_max - window.y_min) / ny
    x1, x2 = np.meshgrid(grid_centers(window.x_min, window.x_max, nx), grid_centers(window.y_min, window.y_max, ny))
    values = kde_evaluate(model, np.column_stack([x1.ravel(), x2.ravel()])).reshape(ny, nx)
    field = ScalarField2D(window.x_min, window.y_min, dx, dy, values)
    return normalize_max(field) if normalize else field
