"""Resonant operating-point solver and applicability checks."""
import numpy as np
import pytest

from gammares.model import ThreeLevelSystem
from gammares.resonance import (applicability, applicability_of, scan_ratio,
                                scan_to_csv, solve_resonance)


def test_hydrogen_five_photon_point(hydrogen_sol):
    assert hydrogen_sol.omega0 == pytest.approx(0.0754, abs=1e-4)
    assert hydrogen_sol.e0 == pytest.approx(0.0377, abs=2e-4)
    assert hydrogen_sol.parity == "odd"
    assert hydrogen_sol.ratio_r == pytest.approx(-1.5, rel=1e-12)


def test_ion_nine_photon_point(ion_sol):
    p = ion_sol.params
    assert p.neardeg_delta == pytest.approx(0.0069, abs=1e-4)
    assert p.stark_f == pytest.approx(-0.0155 * ion_sol.omega0,
                                      abs=5e-4 * ion_sol.omega0)
    assert p.stark_g == pytest.approx(-0.014 * ion_sol.omega0,
                                      abs=5e-4 * ion_sol.omega0)
    assert ion_sol.omega0 == pytest.approx(0.0754, abs=1e-4)
    assert ion_sol.e0 == pytest.approx(0.099, abs=1e-3)


def test_hydrogen_three_photon_point(hydrogen_n3_sol):
    assert hydrogen_n3_sol.omega0 == pytest.approx(0.1255, abs=2e-4)
    assert hydrogen_n3_sol.e0 == pytest.approx(0.0314, abs=2e-4)


def test_operating_intensities(hydrogen_sol, ion_sol):
    assert hydrogen_sol.intensity_wcm2 == pytest.approx(5e13, rel=0.02)
    assert ion_sol.intensity_wcm2 == pytest.approx(3.44e14, rel=0.02)


def test_solution_is_exact_fixed_point(hydrogen_sol, ion_sol, hydrogen_n3_sol):
    for sol in (hydrogen_sol, ion_sol, hydrogen_n3_sol):
        assert abs(sol.params.delta_eff) < 1e-10 * sol.omega0
        assert sol.e0 == pytest.approx(
            abs(sol.ratio_r) * sol.omega0 / abs(sol.system.mu23), rel=1e-12)


def test_applicability_ratios(hydrogen, ion, hydrogen_sol):
    rep = applicability(hydrogen_sol)
    assert rep.a_over_omega == pytest.approx(2.2e-3, abs=2e-4)
    assert rep.passed and not rep.near_boundary

    edge = solve_resonance(hydrogen, 5, ratio_r=3.5)
    rep = applicability_of(edge.params)
    assert rep.a_over_omega == pytest.approx(0.1, abs=0.015)
    assert rep.near_boundary

    edge = solve_resonance(ion, 9, ratio_r=7.15)
    rep = applicability_of(edge.params)
    assert rep.a_over_omega == pytest.approx(0.1, abs=0.015)
    assert rep.near_boundary


def test_scan_contains_operating_point(hydrogen):
    rows = scan_ratio(hydrogen, 5, None, 0.5, 3.5, 31)
    assert len(rows) == 31
    at_r15 = min(rows, key=lambda row: abs(row["r"] - 1.5))
    assert at_r15["intensity_wcm2"] == pytest.approx(5e13, rel=0.02)
    omegas = np.array([row["omega0_au"] for row in rows])
    # smooth, monotone in r: no branch jumps
    assert np.all(np.diff(omegas) > 0)
    assert np.abs(np.diff(omegas)).max() < 2e-4

    import io
    buf = io.StringIO()
    scan_to_csv(rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].startswith("r,omega0_au,e0_au,intensity_wcm2")
    assert len(lines) == 32


def test_scan_validation(hydrogen):
    with pytest.raises(ValueError):
        scan_ratio(hydrogen, 5, None, -1.0, 2.0, 5)
    with pytest.raises(ValueError):
        scan_ratio(hydrogen, 5, None, 2.0, 1.0, 5)
    with pytest.raises(ValueError):
        scan_ratio(hydrogen, 5, None, 0.5, 2.0, 1)


def test_dimensional_scaling(hydrogen):
    base = solve_resonance(hydrogen, 5, ratio_r=1.5)
    c = 1.7
    scaled_system = ThreeLevelSystem(omega21=c * hydrogen.omega21,
                                     omega32=0.0, mu12=hydrogen.mu12,
                                     mu23=hydrogen.mu23)
    scaled = solve_resonance(scaled_system, 5, ratio_r=1.5)
    assert scaled.omega0 == pytest.approx(c * base.omega0, rel=1e-12)


def test_solver_rejections(hydrogen):
    with pytest.raises(ValueError):
        solve_resonance(hydrogen, 5, "even", 1.5)      # parity mismatch
    with pytest.raises(ValueError):
        solve_resonance(hydrogen, 5, ratio_r=0.0)
    two_level = ThreeLevelSystem(omega21=0.375, omega32=0.0,
                                 mu12=0.745, mu23=0.0)
    with pytest.raises(ValueError):
        solve_resonance(two_level, 5, ratio_r=1.5)
    # a huge dipole asymmetry drives the Stark slope below -K: unphysical
    pathological = ThreeLevelSystem(omega21=0.375, omega32=0.0,
                                    mu12=100.0, mu23=1.0)
    with pytest.raises(ValueError):
        solve_resonance(pathological, 5, ratio_r=1.5)


def test_even_parity_solve_runs(ion):
    sol = solve_resonance(ion, 8, ratio_r=3.0)
    assert sol.parity == "even"
    assert abs(sol.params.delta_eff) < 1e-10 * sol.omega0
    # even resonance targets the upper excited level
    assert sol.params.delta == pytest.approx(
        ion.omega31 - 8 * sol.omega0, rel=1e-12)


@pytest.mark.parametrize("preset,order,ratio,cycles", [
    ("hydrogen", 4, 1.5, 120),        # degenerate pair
    ("ion_a2_4plus", 8, 4.0, 260),    # split pair: -Delta enters the solve
])
def test_even_parity_resonance_against_integration(preset, order, ratio, cycles):
    """The even-photon solve lands on resonance in the exact dynamics.

    Complete inversion into the upper excited state confirms the mirror
    Stark sums and the sign of the splitting shift.  The trip period runs
    ~2x the slow-coupling prediction (the dropped fast couplings dwarf
    a_P for even orders; see README) so only a loose window is pinned.
    """
    from gammares import analytic, dynamics
    from gammares.model import DriveField, Envelope, preset_system

    system = preset_system(preset)
    sol = solve_resonance(system, order, ratio_r=ratio)
    fld = DriveField(e0=sol.e0, omega0=sol.omega0,
                     envelope=Envelope.sinsq_turnon(5),
                     duration_cycles=cycles)
    traj = dynamics.integrate(system, fld)
    pops = dynamics.populations(traj)
    assert pops[:, 0].min() < 0.05          # on resonance: full inversion
    assert pops[:, 2].max() > 0.9           # population reaches state 3
    _, trip_numeric = dynamics.population_trip(traj)
    _, trip_analytic = analytic.full_trip_time(sol.params)
    assert 1.0 < trip_numeric / trip_analytic < 3.0
