import math

import numpy as np
import pytest

from tcstates import InitialData, PhysicalParams, PotentialSpec, integrate

UNIT = PhysicalParams(1.0, 1.0)
HARMONIC = PotentialSpec.harmonic(1.0)
FREE = PotentialSpec.free()
QUARTIC = PotentialSpec.quartic(1.0, 0.1)

# Constants C in riccati residual <= C dt^4 (five-point differences),
# measured at dt = 1e-3 and 5e-4 and padded by ~25%.
FD_CONSTANTS = {
    "harmonic_bi": 30.0,
    "harmonic_b2i": 1100.0,
    "free_bi": 32.0,
    "quartic_t1": 480.0,
}


@pytest.fixture(scope="session")
def unit():
    return UNIT


@pytest.fixture(scope="session")
def harmonic_minimal_traj():
    return integrate(HARMONIC, UNIT, InitialData(1.0, 0.0, 1j), 4 * math.pi, 1e-3)


@pytest.fixture(scope="session")
def harmonic_period_traj():
    return integrate(HARMONIC, UNIT, InitialData(1.0, 0.0, 1j), 2 * math.pi, 1e-3)


@pytest.fixture(scope="session")
def harmonic_wide_traj():
    return integrate(HARMONIC, UNIT, InitialData(1.0, 0.0, 2j), 2 * math.pi, 1e-3)


@pytest.fixture(scope="session")
def harmonic_skew_traj():
    return integrate(HARMONIC, UNIT, InitialData(1.0, 0.0, 1 + 1j), 2 * math.pi, 1e-3)


@pytest.fixture(scope="session")
def free_traj():
    return integrate(FREE, UNIT, InitialData(0.0, 1.0, 1j), 2.0, 1e-3)


@pytest.fixture(scope="session")
def quartic_traj():
    return integrate(QUARTIC, UNIT, InitialData(1.0, 0.0, 1j), 20.0, 1e-3)


@pytest.fixture(scope="session")
def all_runs(harmonic_minimal_traj, harmonic_wide_traj, harmonic_skew_traj, free_traj, quartic_traj):
    """(spec, trajectory) pairs used by cross-module property checks."""
    return {
        "harmonic_bi": (HARMONIC, harmonic_minimal_traj),
        "harmonic_b2i": (HARMONIC, harmonic_wide_traj),
        "harmonic_b1+i": (HARMONIC, harmonic_skew_traj),
        "free_bi": (FREE, free_traj),
        "quartic_bi": (QUARTIC, quartic_traj),
    }


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line[1])


def max_abs(a):
    return float(np.max(np.abs(a)))
