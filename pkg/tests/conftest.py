import numpy as np
import pytest

from pbif_homology.cubical import ScalarField2D, Window
from pbif_homology.densities import evaluate_on_grid, normalize_max
from pbif_homology.families import make_model
from pbif_homology.stochastic import SimulationConfig


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def window():
    return Window(-3.0, 3.0, -3.0, 3.0)


@pytest.fixture
def duffing_field(window):
    """Max-normalized Duffing field on a coarse odd grid (the origin is a cell centre)."""

    def build(h: float, n: int = 101) -> ScalarField2D:
        return normalize_max(evaluate_on_grid(make_model("duffing", h=h), window, n, n))

    return build


@pytest.fixture
def crater_field():
    def build(a: float = 1.0, n: int = 81) -> ScalarField2D:
        return normalize_max(evaluate_on_grid(make_model("crater", a=a), Window(-1.6, 1.6, -1.6, 1.6), n, n))

    return build


@pytest.fixture
def quick_sim():
    return SimulationConfig(dt=0.01, burn_in=500, stride=5, n_samples=600)


@pytest.fixture
def make_field():
    def build(values) -> ScalarField2D:
        return ScalarField2D(0.0, 0.0, 1.0, 1.0, np.asarray(values, dtype=float))

    return build
