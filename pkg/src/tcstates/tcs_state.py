"""Construction of the trajectory-coherent state on a grid, and its moments."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classical import CAUSTIC_THRESHOLD, SemiclassicalTrajectory, TrajectoryRecord
from .errors import CausticDetected, GridMismatch, GridTooNarrow, NonAdmissibleB, ZeroNorm
from .hamiltonian import PhysicalParams

GRID_MARGIN_SIGMAS = 6.0
DEFAULT_PAD_SIGMAS = 8.0
DEFAULT_N = 1024


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid x_j = x_min + j h, j = 0..n-1, h = (x_max - x_min)/n."""

    x_min: float
    x_max: float
    n: int = DEFAULT_N

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ValueError(f"x_max ({self.x_max}) must exceed x_min ({self.x_min})")
        if self.n < 16 or self.n & (self.n - 1):
            raise ValueError(f"n must be a power of two >= 16, got {self.n}")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.h * np.arange(self.n)

    @property
    def k(self) -> np.ndarray:
        """Angular wavenumbers in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.h)

    @property
    def k_max(self) -> float:
        return math.pi / self.h

    def shifted(self, delta: float) -> "GridSpec":
        return GridSpec(self.x_min + delta, self.x_max + delta, self.n)


@dataclass(frozen=True, eq=False)
class WaveFunction:
    grid: GridSpec
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.shape != (self.grid.n,):
            raise GridMismatch(f"expected {self.grid.n} amplitudes, got shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.h)

    def to_csv(self, path) -> None:
        write_snapshot_csv(self, path)


class PhaseTracker:
    """Keeps arg z(t) continuous along one propagation sequence.

    Start from arg z(0) = 0 and feed successive z values in time order.
    """

    def __init__(self, arg: float = 0.0):
        self.arg = float(arg)

    def update(self, z: complex) -> float:
        step = math.remainder(math.atan2(z.imag, z.real) - self.arg, 2.0 * math.pi)
        self.arg += step
        return self.arg


def position_width(z: complex, b: complex, hbar: float) -> float:
    return math.sqrt(0.5 * hbar * abs(z) ** 2 / complex(b).imag)


def auto_grid(traj: SemiclassicalTrajectory, hbar: float, n: int = DEFAULT_N,
              pad_sigmas: float = DEFAULT_PAD_SIGMAS) -> GridSpec:
    """Domain covering the trajectory plus ``pad_sigmas`` of the widest packet."""
    sigma_max = float(np.sqrt(0.5 * hbar * np.max(np.abs(traj.z) ** 2) / traj.b.imag))
    return GridSpec(float(np.min(traj.x)) - pad_sigmas * sigma_max,
                    float(np.max(traj.x)) + pad_sigmas * sigma_max, n)


def build_tcs(params: PhysicalParams, point: TrajectoryRecord, b: complex, grid: GridSpec,
              phase_tracker: PhaseTracker | None = None) -> WaveFunction:
    """Gaussian TCS N z^{-1/2} exp(i S(x, t) / hbar) on ``grid``.

    ``phase_tracker`` fixes the branch of z^{-1/2}. When omitted, a fresh
    tracker is used, which is only correct while |arg z| < pi; pass one
    shared tracker through consecutive records otherwise.

    Raises
    ------
    GridTooNarrow
        If either grid edge is closer than six position widths to x(t).
    """
    b = complex(b)
    if not b.imag > 0:
        raise NonAdmissibleB(f"Im(b) must be > 0, got b={b}")
    z = complex(point.z)
    if abs(z) < CAUSTIC_THRESHOLD:
        raise CausticDetected(f"|z| = {abs(z):.3e} at t = {point.t}")
    hbar = params.hbar
    sigma = position_width(z, b, hbar)
    margin = min(point.x - grid.x_min, grid.x_max - point.x)
    if margin < GRID_MARGIN_SIGMAS * sigma:
        raise GridTooNarrow(
            f"grid [{grid.x_min}, {grid.x_max}] leaves {margin:.4g} around x(t)={point.x:.4g}; "
            f"need {GRID_MARGIN_SIGMAS * sigma:.4g} ({GRID_MARGIN_SIGMAS:g} widths)"
        )
    tracker = phase_tracker if phase_tracker is not None else PhaseTracker()
    arg = tracker.update(z)
    prefactor = (b.imag / (math.pi * hbar)) ** 0.25 * abs(z) ** -0.5 * complex(math.cos(-0.5 * arg), math.sin(-0.5 * arg))
    dx = grid.x - point.x
    q = complex(point.w) / z
    phase = point.action + point.p * dx + 0.5 * q * dx * dx
    return WaveFunction(grid, prefactor * np.exp(1j * phase / hbar))


def tcs_series(params: PhysicalParams, traj: SemiclassicalTrajectory, grid: GridSpec, indices=None):
    """Yield (index, WaveFunction) at the requested indices, tracking the branch over every sample."""
    wanted = set(range(len(traj)) if indices is None else indices)
    tracker = PhaseTracker()
    last = max(wanted) if wanted else -1
    for i in range(last + 1):
        if i in wanted:
            yield i, build_tcs(params, traj.record(i), traj.b, grid, tracker)
        else:
            tracker.update(complex(traj.z[i]))


def grid_moments(psi: WaveFunction, hbar: float) -> tuple[float, float, float, float]:
    """(mean_x, mean_p, var_x, var_p) by quadrature; momentum moments spectrally."""
    grid = psi.grid
    dens = np.abs(psi.amplitudes) ** 2
    norm = float(np.sum(dens) * grid.h)
    if norm < 1e-12:
        raise ZeroNorm(f"norm^2 = {norm:.3e}")
    x = grid.x
    mean_x = float(np.sum(x * dens) / np.sum(dens))
    var_x = float(np.sum((x - mean_x) ** 2 * dens) / np.sum(dens))
    kdens = np.abs(np.fft.fft(psi.amplitudes)) ** 2
    pk = hbar * grid.k
    total = np.sum(kdens)
    mean_p = float(np.sum(pk * kdens) / total)
    var_p = float(np.sum((pk - mean_p) ** 2 * kdens) / total)
    return mean_x, mean_p, var_x, var_p


def analytic_moments(point: TrajectoryRecord, b: complex, hbar: float) -> tuple[float, float, float, float]:
    b = complex(b)
    if not b.imag > 0:
        raise NonAdmissibleB(f"Im(b) must be > 0, got b={b}")
    var_x = 0.5 * hbar * abs(point.z) ** 2 / b.imag
    var_p = 0.5 * hbar * abs(point.w) ** 2 / b.imag
    return float(point.x), float(point.p), var_x, var_p


SNAPSHOT_COLUMNS = ("x", "re_psi", "im_psi", "abs2_psi")


def write_snapshot_csv(psi: WaveFunction, path) -> Path:
    path = Path(path)
    a = psi.amplitudes
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SNAPSHOT_COLUMNS)
        for xj, aj in zip(psi.grid.x, a):
            writer.writerow([f"{xj:.17g}", f"{aj.real:.17g}", f"{aj.imag:.17g}", f"{abs(aj) ** 2:.17g}"])
    return path
