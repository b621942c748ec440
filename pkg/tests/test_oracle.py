import math

import numpy as np
import pytest

from tcstates import GridSpec, InitialData, PhysicalParams, PropagatorConfig, build_tcs, integrate, propagate
from tcstates.errors import ConfigInvalid, GridMismatch, ZeroNorm
from tcstates.oracle import l2_distance, phase_aligned_distance
from tcstates.tcs_state import WaveFunction, grid_moments, analytic_moments, tcs_series

from conftest import FREE, HARMONIC, UNIT

GRID = GridSpec(-24.0, 24.0, 1024)


def _gauss(grid, x0=0.0, sigma=1.0, k=0.0):
    x = grid.x
    return WaveFunction(grid, (2 * math.pi * sigma**2) ** -0.25 * np.exp(-((x - x0) ** 2) / (4 * sigma**2) + 1j * k * x))


def test_distance_examples():
    a = _gauss(GRID)
    assert l2_distance(a, a) == 0.0
    assert l2_distance(a, WaveFunction(GRID, -a.amplitudes)) == pytest.approx(2.0, abs=1e-12)
    # Ground and first excited oscillator states are orthogonal.
    odd = WaveFunction(GRID, a.amplitudes * GRID.x)
    odd = WaveFunction(GRID, odd.amplitudes / math.sqrt(odd.norm2()))
    assert l2_distance(a, odd) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert phase_aligned_distance(a, odd) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert phase_aligned_distance(a, WaveFunction(GRID, np.exp(0.7j) * a.amplitudes)) < 1e-14


def test_distance_errors():
    a = _gauss(GRID)
    with pytest.raises(GridMismatch):
        l2_distance(a, _gauss(GridSpec(-24.0, 24.0, 512)))
    with pytest.raises(ZeroNorm):
        phase_aligned_distance(a, WaveFunction(GRID, np.zeros(GRID.n)))


def test_guards():
    assert PropagatorConfig(1e-3, GRID, UNIT, HARMONIC).guard_violations() == []
    with pytest.raises(ConfigInvalid, match="kinetic"):
        PropagatorConfig(1e-3, GridSpec(-8.0, 8.0, 1024), UNIT, HARMONIC).validate()
    with pytest.raises(ConfigInvalid, match="potential"):
        PropagatorConfig(1e-1, GridSpec(-24.0, 24.0, 64), UNIT, HARMONIC).validate()


def test_grid_mismatch():
    cfg = PropagatorConfig(1e-3, GRID, UNIT, FREE)
    with pytest.raises(GridMismatch):
        propagate(_gauss(GridSpec(-24.0, 24.0, 512)), cfg, 0.1)


def test_free_particle_exact():
    grid = GridSpec(-40.0, 40.0, 1024)
    traj = integrate(FREE, UNIT, InitialData(0.0, 1.0, 1j), 2.0, 1e-3)
    (_, a), (_, b) = tcs_series(UNIT, traj, grid, [0, len(traj) - 1])
    psi = propagate(a, PropagatorConfig(1e-3, grid, UNIT, FREE), 2.0)
    assert phase_aligned_distance(psi, b) < 1e-8
    assert l2_distance(psi, b) < 1e-8


def test_harmonic_period(harmonic_period_traj):
    traj = harmonic_period_traj
    (_, a), (_, b) = tcs_series(UNIT, traj, GRID, [0, len(traj) - 1])
    psi = propagate(a, PropagatorConfig(1e-3, GRID, UNIT, HARMONIC), 2 * math.pi)
    assert l2_distance(psi, b) < 1e-6
    # After one period the TCS returns to -psi0 (z^{-1/2} picks up e^{-i pi}), action zero.
    assert l2_distance(WaveFunction(GRID, -a.amplitudes), b) < 1e-7


def test_harmonic_half_period_phase_aligned(harmonic_period_traj):
    i = harmonic_period_traj.index_of(math.pi)
    (_, a), (_, b) = tcs_series(UNIT, harmonic_period_traj, GRID, [0, i])
    psi = propagate(a, PropagatorConfig(1e-3, GRID, UNIT, HARMONIC), harmonic_period_traj.times[i])
    assert phase_aligned_distance(psi, b) < 1e-6


def test_second_order_convergence():
    grid = GridSpec(-24.0, 24.0, 512)
    t = 2.0
    traj = integrate(HARMONIC, UNIT, InitialData(1.0, 0.0, 1j), t, 1e-3)
    (_, a), (_, exact) = tcs_series(UNIT, traj, grid, [0, len(traj) - 1])
    errs = [l2_distance(propagate(a, PropagatorConfig(dt, grid, UNIT, HARMONIC), t), exact) for dt in (4e-3, 2e-3)]
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_shortened_last_step():
    cfg = PropagatorConfig(1e-2, GridSpec(-24.0, 24.0, 128), UNIT, HARMONIC)
    a = _gauss(cfg.grid, 1.0, math.sqrt(0.5))
    once = propagate(a, cfg, 0.125)
    twice = propagate(propagate(a, cfg, 0.12), cfg, 0.005)
    assert l2_distance(once, twice) < 1e-12


def test_unitarity():
    grid = GridSpec(-24.0, 24.0, 256)
    cfg = PropagatorConfig(1e-3, grid, UNIT, HARMONIC)
    a = _gauss(grid, 1.0, 0.9, 0.5)
    psi = propagate(a, cfg, 100.0)
    assert abs(psi.norm2() - a.norm2()) < 1e-10


def test_oracle_moments_match_analytic(harmonic_period_traj):
    traj = harmonic_period_traj
    cfg = PropagatorConfig(1e-3, GRID, UNIT, HARMONIC)
    (_, psi), = tcs_series(UNIT, traj, GRID, [0])
    t_prev = 0.0
    for i in np.linspace(0, len(traj) - 1, 6).astype(int)[1:]:
        psi = propagate(psi, cfg, traj.times[i] - t_prev)
        t_prev = traj.times[i]
        np.testing.assert_allclose(grid_moments(psi, 1.0), analytic_moments(traj.record(i), 1j, 1.0), atol=1e-5)


@pytest.mark.parametrize("lam", [0.05, 0.1])
def test_anharmonic_distance_shrinks_with_hbar(lam):
    from tcstates import PotentialSpec

    spec = PotentialSpec.quartic(1.0, lam)
    grid = GridSpec(-8.0, 8.0, 256)
    dists = []
    for hbar in (1.0, 0.5, 0.25):
        params = PhysicalParams(1.0, hbar)
        traj = integrate(spec, params, InitialData(1.0, 0.0, 1j), 1.0, 1e-3)
        (_, a), (_, b) = tcs_series(params, traj, grid, [0, len(traj) - 1])
        dists.append(phase_aligned_distance(propagate(a, PropagatorConfig(1e-3, grid, params, spec), 1.0), b))
    assert dists[0] > dists[1] > dists[2]
