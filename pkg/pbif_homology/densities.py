"""
Analytical stationary densities, their grid evaluation and critical levels.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .config import D11, GRID_SIZE, KAPPA, Q1, RIM
from .cubical import ScalarField2D, Window, grid_centers
from .errors import EvaluationError, NormalizationError


@dataclass(frozen=True, eq=False)
class DensityModel:
    family: str
    params: Dict[str, float]
    evaluator: Callable[..., np.ndarray]  # evaluator(x1, x2, **params)

    def __post_init__(self):
        for key in ("q1", "D11", "kappa"):
            if key in self.params and not self.params[key] > 0:
                raise ValueError(f"{key} must be positive, got {self.params[key]}")

    def __call__(self, x1, x2) -> np.ndarray:
        return self.evaluator(x1, x2, **self.params)


@dataclass(frozen=True)
class CriticalLevels:
    """Critical values of a max-normalized density."""

    peak_level: float = 1.0
    saddle_level: Optional[float] = None  # two peaks merge
    pit_level: Optional[float] = None  # a loop around a local minimum fills in
    peaks: Tuple[float, ...] = field(default_factory=tuple)

    def levels(self) -> Tuple[float, ...]:
        return tuple(v for v in (self.peak_level, self.saddle_level, self.pit_level) if v is not None)


def duffing_pdf(x1, x2, h: float, q1: float = Q1, D11: float = D11) -> np.ndarray:
    """Unnormalized stationary density of the Duffing oscillator under additive noise."""
    if q1 <= 0 or D11 <= 0:
        raise ValueError("q1 and D11 must be positive")
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    energy = x2 ** 2 + h * x1 ** 2 + 0.5 * x1 ** 4
    return np.exp(-energy / (2.0 * q1 ** 2 * D11))


def crater_pdf(x1, x2, kappa: float = KAPPA, a: float = RIM) -> np.ndarray:
    """Rotationally symmetric crater; the rim at radius sqrt(a) has value 1."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    r2 = np.asarray(x1, dtype=float) ** 2 + np.asarray(x2, dtype=float) ** 2
    return np.exp(-kappa * (r2 - a) ** 2)


def duffing_critical_levels(h: float, q1: float = Q1, D11: float = D11) -> CriticalLevels:
    if q1 <= 0 or D11 <= 0:
        raise ValueError("q1 and D11 must be positive")
    if h >= 0:
        return CriticalLevels(peaks=(0.0,))
    # peaks at x1 = +-sqrt(-h), saddle at the origin
    x_peak = float(np.sqrt(-h))
    saddle = float(np.exp(-h ** 2 / (4.0 * q1 ** 2 * D11)))
    return CriticalLevels(saddle_level=saddle, peaks=(-x_peak, x_peak))


def crater_critical_levels(kappa: float = KAPPA, a: float = RIM) -> CriticalLevels:
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    if a <= 0:
        return CriticalLevels(peaks=(0.0,))
    return CriticalLevels(pit_level=float(np.exp(-kappa * a ** 2)), peaks=(float(np.sqrt(a)),))


def evaluate_on_grid(model: DensityModel, window: Window, nx: int = GRID_SIZE, ny: int = GRID_SIZE) -> ScalarField2D:
    """Sample the model at cell centres of an nx x ny grid over the window."""
    if nx < 2 or ny < 2:
        raise ValueError(f"grid needs at least 2x2 cells, got {nx}x{ny}")
    dx = (window.x_max - window.x_min) / nx
    dy = (window.y_max - window.y_min) / ny
    x1, x2 = np.meshgrid(grid_centers(window.x_min, window.x_max, nx), grid_centers(window.y_min, window.y_max, ny))
    with np.errstate(all="ignore"):
        values = np.asarray(model(x1, x2), dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise EvaluationError(
            f"{model.family} density is not finite at ({x1[i, j]:.6g}, {x2[i, j]:.6g})"
        )
    return ScalarField2D(window.x_min, window.y_min, dx, dy, values)


def normalize_max(field: ScalarField2D) -> ScalarField2D:
    peak = float(field.values.max())
    if not peak > 0:
        raise NormalizationError(f"cannot max-normalize a field whose maximum is {peak}")
    return field.with_values(field.values / peak)
