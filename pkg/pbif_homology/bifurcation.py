"""
Homological bifurcation plots: Betti numbers over (bifurcation parameter, level).
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from .config import EPSILON, GRID_SIZE, SEED, SUBSAMPLE_SIZE, TRANSITION_CELLS, WINDOW, WORKERS
from .consistency import betti_from_sample
from .cubical import Window, betti_vector, default_levels, field_persistence
from .densities import evaluate_on_grid, normalize_max
from .errors import GridMismatchError, PbifError, with_context
from .families import get_family, make_model, make_system, simulation_config
from .stochastic import SimulationConfig, simulate_stationary
from .utils import derive_seed, log

ANALYTICAL = "analytical"
ESTIMATED = "estimated"


@dataclass(frozen=True, eq=False)
class BifurcationPlot:
    family: str
    sweep_param: str
    params: np.ndarray  # h_0 .. h_J
    levels: np.ndarray  # L_0 .. L_K
    betti: Dict[int, np.ndarray]  # dim -> (J+1, K+1)
    provenance: str

    def __post_init__(self):
        shape = (len(self.params), len(self.levels))
        for p, matrix in self.betti.items():
            if matrix.shape != shape:
                raise ValueError(f"beta_{p} matrix has shape {matrix.shape}, expected {shape}")
            if np.any(matrix < 0):
                raise ValueError(f"beta_{p} has negative entries")

    @property
    def dims(self) -> List[int]:
        return sorted(self.betti)


def _run_columns(fn: Callable, tasks: List[Tuple], workers: int, progress: bool, desc: str) -> List:
    """Evaluate fn(*task) for every task; results stay in task order."""
    if workers <= 1:
        return [fn(*task) for task in tqdm(tasks, desc=desc, disable=not progress)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *task) for task in tasks]
        return [f.result() for f in tqdm(futures, desc=desc, disable=not progress)]


def _assemble(columns: List[Dict[int, np.ndarray]], dims: Sequence[int]) -> Dict[int, np.ndarray]:
    return {p: np.vstack([col[p] for col in columns]).astype(int) for p in dims}


def analytical_column(
    family: str,
    value: float,
    levels: np.ndarray,
    dims: Sequence[int],
    params: Dict[str, float],
    window: Window,
    nx: int,
    ny: int,
) -> Dict[int, np.ndarray]:
    sweep = get_family(family).sweep_param
    try:
        model = make_model(family, **{**params, sweep: value})
        field = normalize_max(evaluate_on_grid(model, window, nx, ny))
        diag = field_persistence(field)
    except PbifError as e:
        raise with_context(e, f"{sweep}={value:g}") from e
    return {p: betti_vector(diag, levels, p).counts for p in dims}


def analytical_plot(
    family: str,
    values: Sequence[float],
    levels: Optional[Sequence[float]] = None,
    dims: Sequence[int] = (0, 1),
    params: Optional[Dict[str, float]] = None,
    window: Optional[Window] = None,
    nx: int = GRID_SIZE,
    ny: int = GRID_SIZE,
    workers: int = WORKERS,
    progress: bool = True,
) -> BifurcationPlot:
    spec = get_family(family)
    values = np.asarray(values, dtype=float)
    levels = default_levels() if levels is None else np.asarray(levels, dtype=float)
    window = window or Window(*WINDOW)
    tasks = [(family, float(v), levels, tuple(dims), dict(params or {}), window, nx, ny) for v in values]
    log(f"Analytical {family} sweep: {len(values)} values of {spec.sweep_param}, {len(levels)} levels, {nx}x{ny} grid")
    columns = _run_columns(analytical_column, tasks, workers, progress, "analytical")
    return BifurcationPlot(family, spec.sweep_param, values, levels, _assemble(columns, dims), ANALYTICAL)


def estimated_column(
    family: str,
    value: float,
    index: int,
    levels: np.ndarray,
    dims: Sequence[int],
    params: Dict[str, float],
    sim: SimulationConfig,
    epsilon: float,
    r: Optional[float],
    n: int,
    master_seed: int,
) -> Dict[int, np.ndarray]:
    sweep = get_family(family).sweep_param
    try:
        system = make_system(family, **{**params, sweep: value})
        sample = simulate_stationary(system, sim, derive_seed(master_seed, index))
        vectors = betti_from_sample(sample, levels, dims, r, epsilon, n)
        return {v.dim: v.counts for v in vectors}
    except PbifError as e:
        raise with_context(e, f"{sweep}={value:g}") from e


def estimated_plot(
    family: str,
    values: Sequence[float],
    levels: Optional[Sequence[float]] = None,
    dims: Sequence[int] = (0, 1),
    params: Optional[Dict[str, float]] = None,
    sim: Optional[SimulationConfig] = None,
    epsilon: float = EPSILON,
    r: Optional[float] = None,
    n: int = SUBSAMPLE_SIZE,
    master_seed: int = SEED,
    workers: int = WORKERS,
    progress: bool = True,
) -> BifurcationPlot:
    spec = get_family(family)
    values = np.asarray(values, dtype=float)
    levels = default_levels() if levels is None else np.asarray(levels, dtype=float)
    sim = sim or simulation_config(family)
    tasks = [
        (family, float(v), j, levels, tuple(dims), dict(params or {}), sim, epsilon, r, n, master_seed)
        for j, v in enumerate(values)
    ]
    log(f"Estimated {family} sweep: {len(values)} values of {spec.sweep_param}, seed {master_seed}")
    columns = _run_columns(estimated_column, tasks, workers, progress, "estimated")
    return BifurcationPlot(family, spec.sweep_param, values, levels, _assemble(columns, dims), ESTIMATED)


def error_plot(true: BifurcationPlot, est: BifurcationPlot) -> Dict[int, np.ndarray]:
    """beta_true - beta_estimate per dimension."""
    if true.params.shape != est.params.shape or not np.allclose(true.params, est.params):
        raise GridMismatchError("plots were swept over different parameter values")
    if true.levels.shape != est.levels.shape or not np.allclose(true.levels, est.levels):
        raise GridMismatchError("plots use different level grids")
    if true.dims != est.dims:
        raise GridMismatchError(f"plots cover different dimensions: {true.dims} vs {est.dims}")
    return {p: (true.betti[p] - est.betti[p]).astype(int) for p in true.dims}


def detect_transitions(plot: BifurcationPlot, dim: int, tau: int = TRANSITION_CELLS) -> List[float]:
    """
    Parameter values whose Betti column changes from the previous one in at
    least `tau` level cells, or whose Betti number at the top level changes.

    The top level holds only the density's maxima, so a peak splitting or
    merging shows there even when it spans a single level cell.
    """
    matrix = plot.betti[dim]
    if matrix.shape[1] == 0:
        return []
    top = int(np.argmax(plot.levels))
    found = []
    for j in range(1, matrix.shape[0]):
        before, after = matrix[j - 1], matrix[j]
        reshaped = int(np.count_nonzero(before != after)) >= tau
        if reshaped or before[top] != after[top]:
            found.append(float(plot.params[j]))
    return found


def transition_summary(plot: BifurcationPlot, tau: int = TRANSITION_CELLS) -> Dict[str, List[float]]:
    return {str(p): detect_transitions(plot, p, tau) for p in plot.dims}
