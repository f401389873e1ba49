import numpy as np
import pytest

from pbif_homology.errors import DivergenceError, EmptySampleError
from pbif_homology.simplicial import PointCloud
from pbif_homology.stochastic import (
    SdeSystem,
    SimulationConfig,
    crater_system,
    duffing_system,
    euler_maruyama,
    greedy_indices,
    greedy_permutation,
    simulate_stationary,
    stationary_sample,
)


def test_duffing_drift_and_noise():
    sys = duffing_system(h=1.0)
    assert sys.mu(np.array([1.0, 2.0])).tolist() == [2.0, -4.0]
    # the bistable peaks are fixed points of the drift
    assert duffing_system(h=-1.0).mu(np.array([1.0, 0.0])).tolist() == [0.0, 0.0]
    assert duffing_system(h=0.0, q1=0.7, D11=0.5).sigma(np.zeros(2)).tolist() == pytest.approx([0.0, 0.7])


def test_crater_drift_vanishes_on_rim():
    sys = crater_system(kappa=1.0, a=1.0, rate=1.0)
    assert sys.mu(np.array([0.6, 0.8])) == pytest.approx([0.0, 0.0])
    assert sys.sigma(np.zeros(2)) == pytest.approx([np.sqrt(2.0)] * 2)


def test_crater_rate_scales_drift_and_noise_variance_together():
    x = np.array([0.3, -0.4])
    slow, fast = crater_system(rate=1.0), crater_system(rate=2.0)
    assert fast.mu(x) == pytest.approx(2.0 * slow.mu(x))
    assert fast.sigma(x) ** 2 == pytest.approx(2.0 * slow.sigma(x) ** 2)
    with pytest.raises(ValueError):
        crater_system(rate=0.0)


def test_crater_samples_sit_on_the_rim():
    # u = x1^2 + x2^2 has density exp(-(u - 1)^2) on u >= 0, mean 1.113
    sim = SimulationConfig(dt=0.01, burn_in=1_000, stride=10, n_samples=4_000)
    sample = simulate_stationary(crater_system(), sim, seed=5)
    u = np.sum(sample.points ** 2, axis=1)
    assert u.mean() == pytest.approx(1.113, abs=0.1)


def test_same_seed_same_path():
    sys = duffing_system(h=-0.5)
    a = euler_maruyama(sys, (0.0, 0.0), 0.01, 200, seed=7)
    b = euler_maruyama(sys, (0.0, 0.0), 0.01, 200, seed=7)
    c = euler_maruyama(sys, (0.0, 0.0), 0.01, 200, seed=8)
    assert len(a) == 201
    assert np.array_equal(a.states, b.states)
    assert not np.array_equal(a.states, c.states)


def test_zero_noise_follows_the_drift():
    sys = SdeSystem(lambda x, p: -x, lambda x, p: np.zeros(2))
    traj = euler_maruyama(sys, (1.0, 2.0), 0.1, 10, seed=0)
    assert traj.states[-1] == pytest.approx(np.array([1.0, 2.0]) * 0.9 ** 10)


def test_scalar_decay_matches_the_ode():
    sys = SdeSystem(lambda x, p: -x, lambda x, p: np.zeros(1), dim=1)
    traj = euler_maruyama(sys, (1.0,), 1e-3, 1_000, seed=0)
    assert traj.states[-1, 0] == pytest.approx(np.exp(-1.0), abs=2e-3)


def test_divergence_reports_the_step():
    sys = SdeSystem(lambda x, p: 1e6 * x ** 3, lambda x, p: np.zeros(2))
    with np.errstate(all="ignore"), pytest.raises(DivergenceError) as info:
        euler_maruyama(sys, (10.0, 10.0), 1.0, 50, seed=0)
    assert 1 <= info.value.step <= 50


@pytest.mark.parametrize("dt, n_steps", [(0.0, 10), (0.01, 0)])
def test_bad_step_arguments(dt, n_steps):
    with pytest.raises(ValueError):
        euler_maruyama(duffing_system(0.0), (0.0, 0.0), dt, n_steps, seed=0)


def test_stationary_sample_indices():
    traj = euler_maruyama(duffing_system(0.0), (0.0, 0.0), 0.01, 10, seed=1)
    sample = stationary_sample(traj, burn_in=2, stride=3)
    assert len(sample) == 3
    assert np.array_equal(sample.points, traj.states[[2, 5, 8]])
    with pytest.raises(EmptySampleError):
        stationary_sample(traj, burn_in=20, stride=1)


def test_simulation_config_step_count():
    sim = SimulationConfig()
    assert sim.n_steps == 10_000 + 10 * 4_999
    assert sim.burn_in + sim.stride * (sim.n_samples - 1) == sim.n_steps


def test_stationary_moments():
    # p ~ exp(-x2^2 / (2 q1^2 D11)) so Var[x2] = q1^2 D11 = 1
    sim = SimulationConfig(dt=0.01, burn_in=2_000, stride=10, n_samples=3_000)
    sample = simulate_stationary(duffing_system(h=1.0), sim, seed=3)
    assert len(sample) == 3_000
    assert np.var(sample.points[:, 1]) == pytest.approx(1.0, abs=0.3)
    # p is even in x1; batch means give the standard error of a correlated series
    batches = sample.points[:, 0].reshape(20, -1).mean(axis=1)
    stderr = batches.std(ddof=1) / np.sqrt(len(batches))
    assert abs(sample.points[:, 0].mean()) <= 3 * stderr


def test_greedy_order():
    cloud = PointCloud([[0.0], [1.0], [2.0], [10.0]])
    assert greedy_indices(cloud, 4).tolist() == [0, 3, 2, 1]
    assert greedy_indices(cloud, 10).tolist() == [0, 3, 2, 1]
    assert len(greedy_permutation(cloud, 2)) == 2


def test_greedy_pair_on_a_line():
    line = PointCloud(np.arange(10.0).reshape(-1, 1))
    assert greedy_permutation(line, 2).points.ravel().tolist() == [0.0, 9.0]
    assert greedy_permutation(line, 1).points.ravel().tolist() == [0.0]


def test_greedy_prefix_is_spread_out(rng):
    cloud = PointCloud(rng.random((300, 2)))
    chosen = greedy_permutation(cloud, 30).points
    gaps = [np.min(np.linalg.norm(chosen[:k] - chosen[k], axis=1)) for k in range(1, 30)]
    # each new point is the farthest from those before it, so the gaps never grow
    assert all(a >= b - 1e-12 for a, b in zip(gaps, gaps[1:]))


def test_greedy_needs_positive_n():
    with pytest.raises(ValueError):
        greedy_indices(PointCloud([[0.0]]), 0)
