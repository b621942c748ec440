"""The complex Riccati variable Q = w / z, by two independent routes.

``q_from_trajectory`` takes the pointwise quotient of the variational
solutions; ``integrate_riccati`` integrates the real/imaginary split of the
Riccati equation directly. Agreement between the two guards against sign
slips in either.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .classical import CAUSTIC_THRESHOLD, SemiclassicalTrajectory
from .errors import DivisionNearCaustic, GridMismatch, TooFewPoints
from .hamiltonian import PhysicalParams, PotentialSpec, SymbolPartials, symbol_partials


@dataclass(frozen=True, eq=False)
class RiccatiTrace:
    times: np.ndarray
    q: np.ndarray

    @property
    def q1(self) -> np.ndarray:
        return self.q.real

    @property
    def q2(self) -> np.ndarray:
        return self.q.imag


def q_from_trajectory(traj: SemiclassicalTrajectory) -> RiccatiTrace:
    zabs = np.abs(traj.z)
    if np.any(zabs < CAUSTIC_THRESHOLD):
        i = int(np.argmin(zabs))
        raise DivisionNearCaustic(f"|z| = {zabs[i]:.3e} at t = {traj.times[i]:.6g}")
    return RiccatiTrace(times=np.array(traj.times), q=traj.w / traj.z)


def _riccati_rhs(q1, q2, s: SymbolPartials):
    dq1 = -s.h_pp * (q1 * q1 - q2 * q2) - 2.0 * s.h_px * q1 - s.h_xx
    dq2 = -2.0 * s.h_pp * q1 * q2 - 2.0 * s.h_px * q2
    return dq1, dq2


def integrate_riccati(spec: PotentialSpec, params: PhysicalParams, traj: SemiclassicalTrajectory,
                      b: complex, times: Sequence[float] | None = None) -> RiccatiTrace:
    """RK4 integration of the split Riccati system on the trajectory's time grid.

    The symbol partials at RK4 half steps need x between stored samples;
    it is taken from the cubic Hermite interpolant through (x, p/m) at the
    bracketing samples, which is accurate to O(dt^4).

    Raises
    ------
    GridMismatch
        If ``times`` is given and differs from ``traj.times``.
    """
    if times is not None:
        times = np.asarray(times, dtype=float)
        if times.shape != traj.times.shape or not np.array_equal(times, traj.times):
            raise GridMismatch("requested times differ from the trajectory's time grid")
    b = complex(b)
    m = params.mass
    ts = traj.times
    n = len(ts)
    q1s = np.empty(n)
    q2s = np.empty(n)
    q1, q2 = b.real, b.imag
    q1s[0], q2s[0] = q1, q2
    prev = symbol_partials(spec, params, float(traj.x[0]), float(traj.p[0]), float(ts[0]))
    for i in range(1, n):
        h = ts[i] - ts[i - 1]
        x0, x1 = traj.x[i - 1], traj.x[i]
        v0, v1 = traj.p[i - 1] / m, traj.p[i] / m
        x_mid = 0.5 * (x0 + x1) + 0.125 * h * (v0 - v1)
        p_mid = 0.5 * (traj.p[i - 1] + traj.p[i])
        mid = symbol_partials(spec, params, float(x_mid), float(p_mid), float(ts[i - 1] + 0.5 * h))
        end = symbol_partials(spec, params, float(x1), float(traj.p[i]), float(ts[i]))
        k1 = _riccati_rhs(q1, q2, prev)
        k2 = _riccati_rhs(q1 + 0.5 * h * k1[0], q2 + 0.5 * h * k1[1], mid)
        k3 = _riccati_rhs(q1 + 0.5 * h * k2[0], q2 + 0.5 * h * k2[1], mid)
        k4 = _riccati_rhs(q1 + h * k3[0], q2 + h * k3[1], end)
        q1 += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        q2 += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        q1s[i], q2s[i] = q1, q2
        prev = end
    return RiccatiTrace(times=np.array(ts), q=q1s + 1j * q2s)


def _stencil_weights(times: np.ndarray, width: int) -> tuple[np.ndarray, np.ndarray]:
    """Lagrange-interpolant derivative weights on ``width``-point stencils.

    Returns (start, weights): for sample i the stencil is
    ``times[start[i]:start[i] + width]`` and ``weights[i]`` differentiates the
    interpolant at ``times[i]``. Stencils are centred where possible and
    one-sided at the ends; non-uniform spacing is handled exactly.
    """
    n = len(times)
    idx = np.arange(n)
    start = np.clip(idx - width // 2, 0, n - width)
    nodes = times[start[:, None] + np.arange(width)]  # (n, width)
    j = idx - start
    s_j = times[idx][:, None]
    diff = s_j - nodes  # s_j - s_k
    weights = np.empty((n, width))
    for k in range(width):
        others = [i for i in range(width) if i != k]
        denom = np.prod(nodes[:, [k]] - nodes[:, others], axis=1)
        # l_k'(s_j) for k != j: prod over i != j, k of (s_j - s_i), over denom.
        num = np.ones(n)
        for i in others:
            num = num * np.where(j == i, 1.0, diff[:, i])
        weights[:, k] = num / denom
    # l_j'(s_j) = sum over i != j of 1 / (s_j - s_i)
    with np.errstate(divide="ignore"):
        inv = np.where(np.arange(width)[None, :] == j[:, None], 0.0, 1.0 / diff)
    weights[idx, j] = inv.sum(axis=1)
    return start, weights


def time_derivative(values: np.ndarray, times: np.ndarray, order: int = 4) -> np.ndarray:
    """Finite-difference time derivative of sampled values.

    ``order=4`` uses five-point stencils (centred in the interior, one-sided
    at the ends); ``order=2`` uses three-point ones. Fewer than five samples
    fall back to second order.
    """
    values = np.asarray(values)
    times = np.asarray(times, dtype=float)
    if len(values) < 3:
        raise TooFewPoints(f"need at least 3 samples, got {len(values)}")
    if order == 2 or len(values) < 5:
        return np.gradient(values, times, edge_order=2)
    if order != 4:
        raise ValueError(f"order must be 2 or 4, got {order}")
    start, weights = _stencil_weights(times, 5)
    stencil = values[start[:, None] + np.arange(5)]
    return np.sum(weights * stencil, axis=1)


def riccati_residual(trace: RiccatiTrace, partials_per_time: Sequence[SymbolPartials]) -> np.ndarray:
    """Pointwise |Q' + h_pp Q^2 + 2 h_px Q + h_xx| with Q' by finite differences."""
    if len(trace.times) < 3:
        raise TooFewPoints(f"need at least 3 samples, got {len(trace.times)}")
    if len(partials_per_time) != len(trace.times):
        raise GridMismatch("partials and trace have different lengths")
    q = trace.q
    dq = time_derivative(q, trace.times)
    h_pp = np.array([s.h_pp for s in partials_per_time])
    h_px = np.array([s.h_px for s in partials_per_time])
    h_xx = np.array([s.h_xx for s in partials_per_time])
    return np.abs(dq + h_pp * q * q + 2.0 * h_px * q + h_xx)
