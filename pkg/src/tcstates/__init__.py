"""Trajectory-coherent states for one-dimensional Schrödinger dynamics."""

__version__ = "0.1.0"

from .classical import (
    InitialData,
    SemiclassicalTrajectory,
    TrajectoryRecord,
    closed_form_free,
    closed_form_harmonic,
    integrate,
    symplectic_invariant,
)
from .hamiltonian import (
    PhysicalParams,
    PotentialSpec,
    SymbolPartials,
    eval_potential,
    potential_derivative,
    symbol_partials,
)
from .minimality import MinimalityReport, Tolerances, classify, uncertainty_product
from .oracle import PropagatorConfig, l2_distance, phase_aligned_distance, propagate
from .riccati import RiccatiTrace, integrate_riccati, q_from_trajectory, riccati_residual
from .tcs_state import GridSpec, PhaseTracker, WaveFunction, analytic_moments, build_tcs, grid_moments

__all__ = [
    "GridSpec", "InitialData", "MinimalityReport", "PhaseTracker", "PhysicalParams", "PotentialSpec",
    "PropagatorConfig", "RiccatiTrace", "SemiclassicalTrajectory", "SymbolPartials", "Tolerances",
    "TrajectoryRecord", "WaveFunction", "analytic_moments", "build_tcs", "classify", "closed_form_free",
    "closed_form_harmonic", "eval_potential", "grid_moments", "integrate", "integrate_riccati",
    "l2_distance", "phase_aligned_distance", "potential_derivative", "propagate", "q_from_trajectory",
    "riccati_residual", "symbol_partials", "symplectic_invariant", "uncertainty_product",
]
