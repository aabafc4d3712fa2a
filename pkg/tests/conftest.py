"""Shared fixtures: solved operating points and the heavyweight runs.

The long propagations (the two preset full-inversion runs and their
two-level counterparts) are session-scoped so the acceptance module and
the unit tests share them.
"""
import pytest

from gammares import dynamics, resonance
from gammares.dynamics import IntegrationOptions
from gammares.model import DriveField, Envelope, preset_system


@pytest.fixture(scope="session")
def hydrogen():
    return preset_system("hydrogen")


@pytest.fixture(scope="session")
def ion():
    return preset_system("ion_a2_4plus")


@pytest.fixture(scope="session")
def hydrogen_sol(hydrogen):
    """Five-photon operating point at r = 1.5."""
    return resonance.solve_resonance(hydrogen, 5, ratio_r=1.5)


@pytest.fixture(scope="session")
def ion_sol(ion):
    """Nine-photon operating point at r = 4."""
    return resonance.solve_resonance(ion, 9, ratio_r=4.0)


@pytest.fixture(scope="session")
def hydrogen_n3_sol(hydrogen):
    """Three-photon operating point at r = 0.75."""
    return resonance.solve_resonance(hydrogen, 3, ratio_r=0.75)


def _turnon_field(sol, duration_cycles, turnon_cycles=10.0):
    return DriveField(e0=sol.e0, omega0=sol.omega0,
                      envelope=Envelope.sinsq_turnon(turnon_cycles),
                      duration_cycles=duration_cycles)


def _square_field(sol, duration_cycles):
    return DriveField(e0=sol.e0, omega0=sol.omega0,
                      envelope=Envelope.square(),
                      duration_cycles=duration_cycles)


@pytest.fixture(scope="session")
def hydrogen_fig_run(hydrogen, hydrogen_sol):
    """450-cycle hydrogen run with the 10-cycle turn-on."""
    return dynamics.integrate(hydrogen, _turnon_field(hydrogen_sol, 450))


@pytest.fixture(scope="session")
def ion_fig_run(ion, ion_sol):
    """520-cycle ion run with the 10-cycle turn-on (covers one full trip)."""
    return dynamics.integrate(ion, _turnon_field(ion_sol, 520))


@pytest.fixture(scope="session")
def hydrogen_two_level_run(hydrogen, hydrogen_sol):
    return dynamics.integrate(hydrogen, _turnon_field(hydrogen_sol, 450),
                              IntegrationOptions(drop_third=True))


@pytest.fixture(scope="session")
def ion_two_level_run(ion, ion_sol):
    return dynamics.integrate(ion, _turnon_field(ion_sol, 520),
                              IntegrationOptions(drop_third=True))


@pytest.fixture(scope="session")
def hydrogen_square_run(hydrogen, hydrogen_sol):
    """Square-envelope numeric run matching the analytic branch's premise."""
    return dynamics.integrate(hydrogen, _square_field(hydrogen_sol, 240))


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance: criterion-level checks from the build contract")
