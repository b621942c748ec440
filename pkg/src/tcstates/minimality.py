"""Conditions under which a trajectory-coherent state saturates dx dp >= hbar/2.

The state is minimal for all times exactly when Re b = 0 and
V''(x(t)) = (Im b)^2 / m along the whole trajectory. With Re b = 0 but the
wrong curvature the product equals hbar^2/4 only at t = 0; with Re b != 0
it exceeds hbar^2/4 already at t = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .classical import InitialData, SemiclassicalTrajectory
from .errors import DegenerateSymbol, GridMismatch, NonAdmissibleB, TooFewPoints
from .hamiltonian import PhysicalParams, PotentialSpec, SymbolPartials, partials_along, potential_derivative
from .riccati import RiccatiTrace, time_derivative

MINIMAL_FOR_ALL_T = "minimal_for_all_t"
MINIMAL_AT_T0_ONLY = "minimal_at_t0_only"
NOT_MINIMAL = "not_minimal"
VERDICTS = (MINIMAL_FOR_ALL_T, MINIMAL_AT_T0_ONLY, NOT_MINIMAL)


@dataclass(frozen=True)
class Tolerances:
    tol_b: float = 1e-9  # relative to |b|
    tol_V: float = 1e-6  # absolute, in m = hbar = 1 units
    tol_q1: float = 1e-6


def uncertainty_product(w, z, b: complex, hbar: float):
    """(hbar^2 / 4) |w|^2 |z|^2 / (Im b)^2. Vectorised over w and z."""
    b = complex(b)
    if not b.imag > 0:
        raise NonAdmissibleB(f"Im(b) must be > 0, got b={b}")
    return 0.25 * hbar * hbar * (np.abs(w) ** 2) * (np.abs(z) ** 2) / b.imag**2


def initial_condition_check(b: complex, tol_b: float = 1e-9) -> tuple[bool, float]:
    """Return (|Re b| < tol_b |b|, |Re b|)."""
    b = complex(b)
    residual = abs(b.real)
    return residual < tol_b * abs(b), residual


def _check_aligned(traj: SemiclassicalTrajectory, partials_per_time: Sequence[SymbolPartials]):
    if len(partials_per_time) != len(traj.times):
        raise GridMismatch(f"{len(partials_per_time)} partials for {len(traj.times)} trajectory samples")


def eq7_residual(traj: SemiclassicalTrajectory, partials_per_time: Sequence[SymbolPartials]) -> np.ndarray:
    """|h_pp |w|^2 (w z* + w* z) - h_xx |z|^2 (w z* + w* z)| per stored time."""
    _check_aligned(traj, partials_per_time)
    w, z = traj.w, traj.z
    cross = 2.0 * (w * np.conj(z)).real
    h_pp = np.array([s.h_pp for s in partials_per_time])
    h_xx = np.array([s.h_xx for s in partials_per_time])
    return np.abs(h_pp * np.abs(w) ** 2 * cross - h_xx * np.abs(z) ** 2 * cross)


def eq6_residual(traj: SemiclassicalTrajectory) -> np.ndarray:
    """|d/dt |w z|^2| estimated by finite differences."""
    if len(traj.times) < 3:
        raise TooFewPoints(f"need at least 3 samples, got {len(traj.times)}")
    wz2 = np.abs(traj.w * traj.z) ** 2
    return np.abs(time_derivative(wz2, traj.times))


def trajectory_condition_residual(spec: PotentialSpec, traj: SemiclassicalTrajectory, b: complex,
                                  params: PhysicalParams) -> np.ndarray:
    """|V''(x(t)) - (Im b)^2 / m| per stored time."""
    b = complex(b)
    if not b.imag > 0:
        raise NonAdmissibleB(f"Im(b) must be > 0, got b={b}")
    v2 = potential_derivative(spec, 2, np.asarray(traj.x), mass=params.mass)
    return np.abs(v2 - b.imag**2 / params.mass)


def eq11_residual(partials_per_time: Sequence[SymbolPartials], dt) -> np.ndarray:
    """|d/dt(h_xx/h_pp) + 4 h_px h_xx/h_pp| per sample.

    ``dt`` is either the uniform spacing or the array of sample times.
    """
    if len(partials_per_time) < 3:
        raise TooFewPoints(f"need at least 3 samples, got {len(partials_per_time)}")
    h_pp = np.array([s.h_pp for s in partials_per_time])
    if np.any(np.abs(h_pp) <= 1e-12):
        raise DegenerateSymbol("|h_pp| <= 1e-12; h_xx/h_pp undefined")
    h_xx = np.array([s.h_xx for s in partials_per_time])
    h_px = np.array([s.h_px for s in partials_per_time])
    ratio = h_xx / h_pp
    times = float(dt) * np.arange(len(ratio)) if np.ndim(dt) == 0 else np.asarray(dt, dtype=float)
    d_ratio = time_derivative(ratio, times)
    return np.abs(d_ratio + 4.0 * h_px * ratio)


def q1_uniqueness_check(trace: RiccatiTrace, tol: float) -> bool:
    return bool(np.max(np.abs(trace.q1)) < tol)


def q1_departure_time(trace: RiccatiTrace, tol: float) -> float | None:
    """First stored time at which |Re Q| reaches ``tol``, or None."""
    idx = np.flatnonzero(np.abs(trace.q1) >= tol)
    return float(trace.times[idx[0]]) if idx.size else None


@dataclass(frozen=True, eq=False)
class MinimalityReport:
    times: np.ndarray
    re_b_zero: bool
    re_b_residual: float
    product_trace: np.ndarray
    eq6_residual: np.ndarray
    eq7_residual: np.ndarray
    eq14_residual: np.ndarray
    verdict: str
    eq11_residual: np.ndarray = field(default=None)
    q1_zero: bool | None = None
    q1_departure_time: float | None = None

    def to_dict(self) -> dict:
        d = {
            "times": self.times.tolist(),
            "re_b_zero": bool(self.re_b_zero),
            "re_b_residual": float(self.re_b_residual),
            "product_trace": self.product_trace.tolist(),
            "eq6_residual": self.eq6_residual.tolist(),
            "eq7_residual": self.eq7_residual.tolist(),
            "eq14_residual": self.eq14_residual.tolist(),
            "verdict": self.verdict,
        }
        if self.eq11_residual is not None:
            d["eq11_residual"] = self.eq11_residual.tolist()
        if self.q1_zero is not None:
            d["q1_zero"] = bool(self.q1_zero)
            d["q1_departure_time"] = self.q1_departure_time
        return d


def verdict_for(re_b_zero: bool, max_eq14: float, tol_V: float) -> str:
    if not re_b_zero:
        return NOT_MINIMAL
    return MINIMAL_FOR_ALL_T if max_eq14 < tol_V else MINIMAL_AT_T0_ONLY


def classify(spec: PotentialSpec, params: PhysicalParams, init: InitialData, traj: SemiclassicalTrajectory,
             trace: RiccatiTrace, tolerances: Tolerances | None = None) -> MinimalityReport:
    tol = tolerances or Tolerances()
    if not np.array_equal(trace.times, traj.times):
        raise GridMismatch("Riccati trace and trajectory are on different time grids")
    b = complex(init.b)
    partials = partials_along(spec, params, traj)
    re_ok, re_res = initial_condition_check(b, tol.tol_b)
    eq14 = trajectory_condition_residual(spec, traj, b, params)
    q1_zero = q1_uniqueness_check(trace, tol.tol_q1) if re_ok else None
    return MinimalityReport(
        times=np.array(traj.times),
        re_b_zero=re_ok,
        re_b_residual=re_res,
        product_trace=uncertainty_product(traj.w, traj.z, b, params.hbar),
        eq6_residual=eq6_residual(traj),
        eq7_residual=eq7_residual(traj, partials),
        eq14_residual=eq14,
        verdict=verdict_for(re_ok, float(np.max(eq14)), tol.tol_V),
        eq11_residual=eq11_residual(partials, traj.times),
        q1_zero=q1_zero,
        q1_departure_time=q1_departure_time(trace, tol.tol_q1) if re_ok else None,
    )
