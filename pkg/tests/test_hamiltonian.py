import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tcstates import PhysicalParams, PotentialSpec, eval_potential, potential_derivative, symbol_partials
from tcstates.hamiltonian import hamiltonian

SPECS = [
    PotentialSpec.free(),
    PotentialSpec.harmonic(1.3),
    PotentialSpec.polynomial([0.2, -1.0, 0.5, 0.3, 0.1]),
    PotentialSpec.quartic(0.8, 0.05),
]


def test_eval_examples():
    assert eval_potential(PotentialSpec.harmonic(1.0), 2.0, 0.0, mass=1.0) == 2.0
    assert eval_potential(PotentialSpec.free(), 17.3) == 0.0
    assert eval_potential(PotentialSpec.polynomial([0, 0, 0.5, 0, 0.1]), 1.0) == pytest.approx(0.6, abs=1e-15)


def test_derivative_examples():
    assert potential_derivative(PotentialSpec.harmonic(2.0), 2, 0.37, mass=1.0) == 4.0
    for x in (-3.0, 0.0, 2.5):
        assert potential_derivative(PotentialSpec.harmonic(2.0), 3, x) == 0.0
    assert potential_derivative(PotentialSpec.polynomial([0, 0, 0, 1]), 2, 2.0) == 12.0


def test_derivative_beyond_degree_vanishes():
    spec = PotentialSpec.polynomial([1.0, 2.0, 3.0])
    for k in range(3, 7):
        assert potential_derivative(spec, k, 1.7) == 0.0


def test_negative_order_rejected():
    with pytest.raises(ValueError):
        potential_derivative(PotentialSpec.free(), -1, 0.0)


def test_symbol_partials_examples():
    s = symbol_partials(PotentialSpec.harmonic(1.0), PhysicalParams(1.0, 1.0), 0.3, -0.2)
    assert (s.h_xx, s.h_xp, s.h_px, s.h_pp) == (1.0, 0.0, 0.0, 1.0)
    s = symbol_partials(PotentialSpec.free(), PhysicalParams(2.0, 1.0), 4.0, 1.0)
    assert (s.h_xx, s.h_xp, s.h_px, s.h_pp) == (0.0, 0.0, 0.0, 0.5)
    s = symbol_partials(PotentialSpec.quartic(1.0, 0.1), PhysicalParams(1.0, 1.0), 1.0, 0.0)
    assert s.h_xx == pytest.approx(2.2, rel=1e-14)
    assert s.h_xp == s.h_px


@pytest.mark.parametrize("mass", [0.5, 1.0, 3.0])
def test_harmonic_equals_polynomial(mass):
    omega = 1.7
    x = np.linspace(-4, 4, 33)
    harm = PotentialSpec.harmonic(omega)
    poly = PotentialSpec.polynomial([0.0, 0.0, 0.5 * mass * omega**2])
    for k in range(4):
        np.testing.assert_array_equal(
            potential_derivative(harm, k, x, mass=mass), potential_derivative(poly, k, x, mass=mass)
        )


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind)
def test_analytic_matches_finite_difference(spec):
    rng = np.random.default_rng(20261014)
    xs = rng.uniform(-5, 5, size=100)
    h = 1e-4
    for order in (1, 2):
        lower = lambda x: potential_derivative(spec, order - 1, x, mass=1.3)
        fd = (lower(xs + h) - lower(xs - h)) / (2 * h)
        exact = potential_derivative(spec, order, xs, mass=1.3)
        rel = np.abs(fd - exact) / np.maximum(np.abs(exact), 1.0)
        assert np.max(rel) < 1e-6


@settings(max_examples=60, deadline=None)
@given(
    coeffs=st.lists(st.floats(-10, 10), min_size=1, max_size=7),
    x=st.floats(-5, 5),
)
def test_order_zero_is_the_potential(coeffs, x):
    spec = PotentialSpec.polynomial(coeffs)
    assert potential_derivative(spec, 0, x) == eval_potential(spec, x)


def test_time_argument_is_ignored():
    spec = PotentialSpec.quartic(1.0, 0.1)
    assert eval_potential(spec, 0.7, 0.0) == eval_potential(spec, 0.7, 123.4)


def test_hamiltonian_value():
    assert hamiltonian(PotentialSpec.harmonic(1.0), PhysicalParams(2.0, 1.0), 1.0, 2.0) == pytest.approx(1.0 + 1.0)


@pytest.mark.parametrize("kwargs", [dict(mass=0.0), dict(mass=-1.0), dict(hbar=0.0)])
def test_params_must_be_positive(kwargs):
    with pytest.raises(ValueError):
        PhysicalParams(**kwargs)


def test_bad_potential_kind():
    with pytest.raises(ValueError):
        PotentialSpec("morse")
    with pytest.raises(ValueError):
        PotentialSpec.harmonic(0.0)


def test_round_trip_dict():
    for spec in SPECS:
        assert PotentialSpec.from_dict(spec.to_dict()) == spec
