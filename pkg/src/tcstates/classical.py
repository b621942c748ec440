"""Classical trajectory, system in variations and accumulated action.

The coupled system integrated here is::

    x' = p/m,  p' = -V'(x),  w' = -V''(x) z,  z' = w/m,  S' = x' p - H

with x(0)=x0, p(0)=p0, w(0)=b, z(0)=1, S(0)=0. The pair (w, z) is complex;
everything else is real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CausticDetected, InvalidStep, NonAdmissibleB
from .hamiltonian import PhysicalParams, PotentialSpec, _derivative_coeffs, hamiltonian

CAUSTIC_THRESHOLD = 1e-12


class TrajectoryRecord(NamedTuple):
    t: float
    x: float
    p: float
    action: float
    w: complex
    z: complex


@dataclass(frozen=True)
class InitialData:
    x0: float
    p0: float
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "b", complex(self.b))
        if not self.b.imag > 0:
            raise NonAdmissibleB(f"Im(b) must be > 0, got b={self.b}")


@dataclass(frozen=True, eq=False)
class SemiclassicalTrajectory:
    """Dense time series of (x, p, action, w, z) on a fixed time grid."""

    times: np.ndarray
    x: np.ndarray
    p: np.ndarray
    action: np.ndarray
    w: np.ndarray
    z: np.ndarray
    b: complex

    def __post_init__(self):
        for name in ("times", "x", "p", "action", "w", "z"):
            getattr(self, name).setflags(write=False)

    def __len__(self) -> int:
        return len(self.times)

    def record(self, i: int) -> TrajectoryRecord:
        return TrajectoryRecord(
            float(self.times[i]), float(self.x[i]), float(self.p[i]),
            float(self.action[i]), complex(self.w[i]), complex(self.z[i]),
        )

    def records(self):
        return (self.record(i) for i in range(len(self)))

    def index_of(self, t: float) -> int:
        """Index of the stored time nearest to ``t``."""
        return int(np.argmin(np.abs(self.times - t)))


def time_grid(t_final: float, dt: float) -> np.ndarray:
    """Sample times 0, dt, 2dt, ..., t_final with a shortened last step."""
    n_full = int(math.floor(t_final / dt * (1.0 + 1e-12)))
    times = dt * np.arange(n_full + 1, dtype=float)
    if t_final - times[-1] > 1e-9 * dt:
        times = np.append(times, t_final)
    else:
        times[-1] = t_final
    return times


def integrate(spec: PotentialSpec, params: PhysicalParams, init: InitialData,
              t_final: float, dt: float) -> SemiclassicalTrajectory:
    """Integrate the classical and variational equations with fixed-step RK4.

    Raises
    ------
    InvalidStep
        If ``dt <= 0``, ``t_final <= 0`` or ``dt > t_final``.
    NonAdmissibleB
        If ``Im(init.b) <= 0``.
    CausticDetected
        If ``|z|`` drops below ``CAUSTIC_THRESHOLD``.
    """
    if not (dt > 0 and t_final > 0):
        raise InvalidStep(f"need dt > 0 and t_final > 0, got dt={dt}, t_final={t_final}")
    if dt > t_final:
        raise InvalidStep(f"dt={dt} exceeds t_final={t_final}")
    b = complex(init.b)
    if not b.imag > 0:
        raise NonAdmissibleB(f"Im(b) must be > 0, got b={b}")

    m = params.mass
    inv_m = 1.0 / m
    c0 = _derivative_coeffs(spec, 0, m)
    c1 = _derivative_coeffs(spec, 1, m)
    c2 = _derivative_coeffs(spec, 2, m)

    def horner(c, x):
        acc = c[-1]
        for ck in reversed(c[:-1]):
            acc = acc * x + ck
        return acc

    def rhs(x, p, w, z):
        v2 = horner(c2, x)
        lagr = 0.5 * p * p * inv_m - horner(c0, x)
        return p * inv_m, -horner(c1, x), -v2 * z, w * inv_m, lagr

    times = time_grid(t_final, dt)
    n = len(times)
    xs = np.empty(n)
    ps = np.empty(n)
    ss = np.empty(n)
    ws = np.empty(n, dtype=complex)
    zs = np.empty(n, dtype=complex)

    x, p, w, z, s = float(init.x0), float(init.p0), b, 1.0 + 0.0j, 0.0
    xs[0], ps[0], ws[0], zs[0], ss[0] = x, p, w, z, s
    for i in range(1, n):
        h = times[i] - times[i - 1]
        hh = 0.5 * h
        k1 = rhs(x, p, w, z)
        k2 = rhs(x + hh * k1[0], p + hh * k1[1], w + hh * k1[2], z + hh * k1[3])
        k3 = rhs(x + hh * k2[0], p + hh * k2[1], w + hh * k2[2], z + hh * k2[3])
        k4 = rhs(x + h * k3[0], p + h * k3[1], w + h * k3[2], z + h * k3[3])
        h6 = h / 6.0
        x += h6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        p += h6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        w += h6 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        z += h6 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])
        s += h6 * (k1[4] + 2.0 * k2[4] + 2.0 * k3[4] + k4[4])
        if abs(z) < CAUSTIC_THRESHOLD:
            raise CausticDetected(f"|z| = {abs(z):.3e} at t = {times[i]:.6g}")
        xs[i], ps[i], ws[i], zs[i], ss[i] = x, p, w, z, s

    return SemiclassicalTrajectory(times=times, x=xs, p=ps, action=ss, w=ws, z=zs, b=b)


def symplectic_invariant(w, z):
    """w conj(z) - conj(w) z, equal to 2i Im(b) along any exact solution."""
    return w * np.conj(z) - np.conj(w) * z


def energy(spec: PotentialSpec, params: PhysicalParams, traj: SemiclassicalTrajectory) -> np.ndarray:
    return hamiltonian(spec, params, traj.x, traj.p)


def closed_form_harmonic(omega: float, params: PhysicalParams, R: float, b: complex, t) -> TrajectoryRecord:
    """Exact record for V = m omega^2 x^2 / 2 with x0 = R, p0 = 0.

    ``t`` may be a scalar or an array; fields broadcast accordingly.
    """
    m = params.mass
    mw = m * omega
    c, s = np.cos(omega * t), np.sin(omega * t)
    x = R * c
    p = -mw * R * s
    w = b * c - mw * s
    z = (b / mw) * s + c
    # Lagrangian -(m omega^2 R^2 / 2) cos(2 omega t), integrated from 0.
    action = -0.25 * mw * R * R * np.sin(2.0 * omega * t)
    return TrajectoryRecord(t, x, p, action, w, z)


def closed_form_free(params: PhysicalParams, x0: float, p0: float, b: complex, t) -> TrajectoryRecord:
    m = params.mass
    return TrajectoryRecord(
        t, x0 + p0 * t / m, p0 + 0.0 * t, p0 * p0 / (2.0 * m) * t,
        b + 0.0 * t, 1.0 + b * t / m,
    )
