"""Physical parameters, potentials and the mechanical Hamiltonian symbol.

Potentials are time-independent polynomials in x. The ``t`` argument is
accepted everywhere so that explicitly time-dependent potentials can be
added later without changing any call sites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

POTENTIAL_KINDS = ("free", "harmonic", "polynomial", "quartic")


@dataclass(frozen=True)
class PhysicalParams:
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise ValueError(f"mass must be positive, got {self.mass!r}")
        if not (self.hbar > 0 and math.isfinite(self.hbar)):
            raise ValueError(f"hbar must be positive, got {self.hbar!r}")


@dataclass(frozen=True)
class PotentialSpec:
    """Description of a polynomial potential V(x).

    Use the constructors :meth:`free`, :meth:`harmonic`, :meth:`polynomial`
    and :meth:`quartic` rather than building instances by hand.

    ``harmonic`` is ``m omega^2 x^2 / 2`` and ``quartic`` is
    ``m omega^2 x^2 / 2 + lam x^4``; both depend on the particle mass, which
    is supplied at evaluation time.
    """

    kind: str
    omega: float = 0.0
    lam: float = 0.0
    coeffs: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in POTENTIAL_KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}; expected one of {POTENTIAL_KINDS}")
        if self.kind in ("harmonic", "quartic") and not self.omega > 0:
            raise ValueError(f"{self.kind} potential needs omega > 0, got {self.omega!r}")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @classmethod
    def free(cls) -> "PotentialSpec":
        return cls("free")

    @classmethod
    def harmonic(cls, omega: float) -> "PotentialSpec":
        return cls("harmonic", omega=float(omega))

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> "PotentialSpec":
        """``coeffs[k]`` multiplies ``x**k``."""
        return cls("polynomial", coeffs=tuple(coeffs))

    @classmethod
    def quartic(cls, omega: float, lam: float) -> "PotentialSpec":
        return cls("quartic", omega=float(omega), lam=float(lam))

    def coefficients(self, mass: float = 1.0) -> tuple[float, ...]:
        """Polynomial coefficients of V, lowest degree first."""
        if self.kind == "free":
            return (0.0,)
        if self.kind == "harmonic":
            return (0.0, 0.0, 0.5 * mass * self.omega**2)
        if self.kind == "quartic":
            return (0.0, 0.0, 0.5 * mass * self.omega**2, 0.0, self.lam)
        return self.coeffs or (0.0,)

    @property
    def degree(self) -> int:
        c = self.coefficients()
        return max((k for k, v in enumerate(c) if v != 0.0), default=0)

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind in ("harmonic", "quartic"):
            d["omega"] = self.omega
        if self.kind == "quartic":
            d["lambda"] = self.lam
        if self.kind == "polynomial":
            d["coeffs"] = list(self.coeffs)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PotentialSpec":
        kind = d["kind"]
        if kind == "free":
            return cls.free()
        if kind == "harmonic":
            return cls.harmonic(d["omega"])
        if kind == "quartic":
            return cls.quartic(d["omega"], d["lambda"])
        if kind == "polynomial":
            return cls.polynomial(d["coeffs"])
        raise ValueError(f"unknown potential kind {kind!r}")


@dataclass(frozen=True)
class SymbolPartials:
    """Second partials of H(x, p, t) evaluated on the trajectory at one instant."""

    h_xx: float
    h_xp: float
    h_px: float
    h_pp: float


@lru_cache(maxsize=256)
def _derivative_coeffs(spec: PotentialSpec, order: int, mass: float) -> tuple[float, ...]:
    c = list(spec.coefficients(mass))
    for _ in range(order):
        c = [k * c[k] for k in range(1, len(c))]
        if not c:
            return (0.0,)
    return tuple(c)


def _horner(coeffs, x):
    acc = coeffs[-1] * np.ones_like(x) if isinstance(x, np.ndarray) else coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def eval_potential(spec: PotentialSpec, x, t: float = 0.0, *, mass: float = 1.0):
    """V(x, t). Works on scalars and numpy arrays."""
    return _horner(_derivative_coeffs(spec, 0, float(mass)), x)


def potential_derivative(spec: PotentialSpec, order: int, x, t: float = 0.0, *, mass: float = 1.0):
    """Analytic k-th x-derivative of V at (x, t)."""
    if order < 0:
        raise ValueError(f"derivative order must be nonnegative, got {order}")
    return _horner(_derivative_coeffs(spec, int(order), float(mass)), x)


def hamiltonian(spec: PotentialSpec, params: PhysicalParams, x, p, t: float = 0.0):
    """Classical symbol H = p^2 / 2m + V(x, t)."""
    return p * p / (2.0 * params.mass) + eval_potential(spec, x, t, mass=params.mass)


def symbol_partials(spec: PotentialSpec, params: PhysicalParams, x: float, p: float, t: float = 0.0) -> SymbolPartials:
    h_xx = float(potential_derivative(spec, 2, x, t, mass=params.mass))
    return SymbolPartials(h_xx=h_xx, h_xp=0.0, h_px=0.0, h_pp=1.0 / params.mass)


def partials_along(spec: PotentialSpec, params: PhysicalParams, traj) -> list[SymbolPartials]:
    """Symbol partials at every stored time of a trajectory."""
    return [symbol_partials(spec, params, float(x), float(p), float(t)) for t, x, p in zip(traj.times, traj.x, traj.p)]
