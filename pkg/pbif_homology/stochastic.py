"""
Euler-Maruyama simulation, stationary sampling and greedy permutation.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Sequence, Tuple

import numpy as np

from .config import BURN_IN, CRATER_RATE, D11, DT, KAPPA, NUM_SAMPLES, Q1, RIM, STRIDE
from .errors import DivergenceError, EmptySampleError
from .simplicial import PointCloud


@dataclass(frozen=True)
class SdeSystem:
    drift: Callable[[np.ndarray, Dict[str, float]], np.ndarray]
    diffusion: Callable[[np.ndarray, Dict[str, float]], np.ndarray]
    params: Dict[str, float] = field(default_factory=dict)
    dim: int = 2

    def _checked(self, out, what: str) -> np.ndarray:
        out = np.asarray(out, dtype=float)
        if out.shape != (self.dim,):
            raise ValueError(f"{what} returned shape {out.shape}, expected ({self.dim},)")
        return out

    def mu(self, x: np.ndarray) -> np.ndarray:
        return self._checked(self.drift(x, self.params), "drift")

    def sigma(self, x: np.ndarray) -> np.ndarray:
        return self._checked(self.diffusion(x, self.params), "diffusion")


@dataclass(frozen=True, eq=False)
class Trajectory:
    dt: float
    states: np.ndarray  # (length, dim)
    seed: int

    def __len__(self) -> int:
        return self.states.shape[0]


@dataclass(frozen=True)
class SimulationConfig:
    dt: float = DT
    burn_in: int = BURN_IN
    stride: int = STRIDE
    n_samples: int = NUM_SAMPLES
    x0: Tuple[float, ...] = (0.0, 0.0)

    @property
    def n_steps(self) -> int:
        # the last kept state is exactly the n_samples-th after burn-in
        return self.burn_in + self.stride * (self.n_samples - 1)


def _duffing_drift(x, p):
    return np.array([x[1], -x[1] - p["h"] * x[0] - x[0] ** 3])


def _duffing_diffusion(x, p):
    return np.array([0.0, p["q1"] * np.sqrt(2.0 * p["D11"])])


def duffing_system(h: float, q1: float = Q1, D11: float = D11) -> SdeSystem:
    """
    x1' = x2, x2' = -x2 - h*x1 - x1^3 + noise on the second component only.
    The noise gain q1*sqrt(2*D11) makes the stationary density match duffing_pdf.
    """
    return SdeSystem(_duffing_drift, _duffing_diffusion, {"h": float(h), "q1": float(q1), "D11": float(D11)})


def _crater_drift(x, p):
    return -4.0 * p["rate"] * p["kappa"] * (x[0] ** 2 + x[1] ** 2 - p["a"]) * np.asarray(x, dtype=float)


def _langevin_noise(x, p):
    return np.full(2, np.sqrt(2.0 * p["rate"]))


def crater_system(kappa: float = KAPPA, a: float = RIM, rate: float = CRATER_RATE) -> SdeSystem:
    """
    Overdamped Langevin dynamics dX = rate * grad log p dt + sqrt(2 rate) dW
    whose stationary density is crater_pdf for every rate > 0.
    """
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    return SdeSystem(_crater_drift, _langevin_noise, {"kappa": float(kappa), "a": float(a), "rate": float(rate)})


def euler_maruyama(sys: SdeSystem, x0: Sequence[float], dt: float, n_steps: int, seed: int) -> Trajectory:
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    x = np.asarray(x0, dtype=float).reshape(-1)
    if x.shape != (sys.dim,):
        raise ValueError(f"x0 has {x.size} components, system has {sys.dim}")

    rng = np.random.default_rng(seed)
    increments = rng.standard_normal((n_steps, sys.dim)) * np.sqrt(dt)
    states = np.empty((n_steps + 1, sys.dim))
    states[0] = x
    for k in range(n_steps):
        x = x + sys.mu(x) * dt + sys.sigma(x) * increments[k]
        if not np.all(np.isfinite(x)):
            raise DivergenceError(k + 1)
        states[k + 1] = x
    return Trajectory(dt, states, seed)


def stationary_sample(traj: Trajectory, burn_in: int = BURN_IN, stride: int = STRIDE) -> PointCloud:
    if burn_in < 0 or stride < 1:
        raise ValueError(f"need burn_in >= 0 and stride >= 1, got {burn_in}, {stride}")
    kept = traj.states[burn_in::stride]
    if kept.shape[0] == 0:
        raise EmptySampleError(f"burn-in {burn_in} leaves nothing of a {len(traj)}-state trajectory")
    return PointCloud(kept)


def simulate_stationary(sys: SdeSystem, sim: SimulationConfig, seed: int) -> PointCloud:
    traj = euler_maruyama(sys, sim.x0, sim.dt, sim.n_steps, seed)
    return stationary_sample(traj, sim.burn_in, sim.stride)


def greedy_indices(cloud: PointCloud, n: int) -> np.ndarray:
    """Farthest-point order starting at the first point."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    points = cloud.points
    k = min(n, len(cloud))
    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = 0
    dist = np.linalg.norm(points - points[0], axis=1)
    dist[0] = -np.inf
    for i in range(1, k):
        nxt = int(np.argmax(dist))
        chosen[i] = nxt
        dist = np.minimum(dist, np.linalg.norm(points - points[nxt], axis=1))
        dist[nxt] = -np.inf
    return chosen


def greedy_permutation(cloud: PointCloud, n: int) -> PointCloud:
    return cloud.subset(greedy_indices(cloud, n))
