"""Split-operator reference propagator for i hbar psi_t = (p^2/2m + V) psi.

Strang splitting on a periodic grid: half a potential kick, a full kinetic
step applied in momentum space, half a potential kick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigInvalid, GridMismatch, ZeroNorm
from .hamiltonian import PhysicalParams, PotentialSpec, eval_potential
from .tcs_state import GridSpec, WaveFunction


@dataclass(frozen=True)
class PropagatorConfig:
    dt: float
    grid: GridSpec
    params: PhysicalParams
    spec: PotentialSpec

    def guard_violations(self) -> list[str]:
        out = []
        if not self.dt > 0:
            out.append(f"dt must be positive, got {self.dt}")
            return out
        hbar, m = self.params.hbar, self.params.mass
        v_max = float(np.max(np.abs(eval_potential(self.spec, self.grid.x, mass=m))))
        if v_max * self.dt / hbar >= math.pi:
            out.append(f"potential phase max|V| dt / hbar = {v_max * self.dt / hbar:.4g} >= pi")
        kin = hbar * self.grid.k_max**2 / (2.0 * m) * self.dt
        if kin >= math.pi:
            out.append(f"kinetic phase hbar k_max^2 dt / 2m = {kin:.4g} >= pi")
        return out

    def validate(self) -> None:
        problems = self.guard_violations()
        if problems:
            raise ConfigInvalid("; ".join(problems))


def propagate(psi0: WaveFunction, cfg: PropagatorConfig, t_final: float) -> WaveFunction:
    """Evolve ``psi0`` by ``t_final`` in steps of ``cfg.dt``; the last step is shortened if needed."""
    cfg.validate()
    if psi0.grid != cfg.grid:
        raise GridMismatch("wavefunction grid differs from propagator grid")
    if t_final < 0:
        raise ValueError(f"t_final must be nonnegative, got {t_final}")
    n_full = int(math.floor(t_final / cfg.dt * (1.0 + 1e-12)))
    rest = t_final - n_full * cfg.dt
    if rest <= 1e-9 * cfg.dt:
        rest = 0.0

    hbar, m = cfg.params.hbar, cfg.params.mass
    v = eval_potential(cfg.spec, cfg.grid.x, mass=m)
    kinetic = (hbar * cfg.grid.k) ** 2 / (2.0 * m)
    psi = np.array(psi0.amplitudes, dtype=complex)

    def run(h, steps):
        nonlocal psi
        if steps == 0:
            return
        half_v = np.exp(-0.5j * h * v / hbar)
        full_v = half_v * half_v
        kin = np.exp(-1j * h * kinetic / hbar)
        # Adjacent half kicks of consecutive steps are merged into full kicks.
        psi *= half_v
        for i in range(steps):
            psi = np.fft.ifft(kin * np.fft.fft(psi))
            psi *= half_v if i == steps - 1 else full_v

    run(cfg.dt, n_full)
    if rest:
        run(rest, 1)
    return WaveFunction(cfg.grid, psi)


def _same_grid(a: WaveFunction, b: WaveFunction) -> None:
    if a.grid != b.grid:
        raise GridMismatch("wavefunctions live on different grids")


def inner(a: WaveFunction, b: WaveFunction) -> complex:
    """<a|b> by quadrature."""
    _same_grid(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes) * a.grid.h)


def l2_distance(a: WaveFunction, b: WaveFunction) -> float:
    _same_grid(a, b)
    return float(np.sqrt(np.sum(np.abs(a.amplitudes - b.amplitudes) ** 2) * a.grid.h))


def phase_aligned_distance(a: WaveFunction, b: WaveFunction) -> float:
    """min over theta of ||e^{i theta} a - b||, attained at theta = arg <a|b>."""
    _same_grid(a, b)
    if a.norm2() < 1e-300 or b.norm2() < 1e-300:
        raise ZeroNorm("phase alignment needs two nonzero states")
    overlap = inner(a, b)
    rot = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.sqrt(np.sum(np.abs(rot * a.amplitudes - b.amplitudes) ** 2) * a.grid.h))
