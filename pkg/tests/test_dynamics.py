"""Numerical propagation: conservation laws, convergence, limits."""
import io

import numpy as np
import pytest

from gammares.dynamics import (IntegrationOptions, IntegrationQualityError,
                               cycle_average, dipole_series, export_csv,
                               integrate, populations, population_trip)
from gammares.kernels import load_backend
from gammares.model import DriveField, Envelope


def hydrogen_field(duration, steps=2048, turnon=10.0, e0=None):
    omega0 = 0.0753777
    return DriveField(e0=0.0376889 if e0 is None else e0, omega0=omega0,
                      envelope=Envelope.sinsq_turnon(turnon),
                      duration_cycles=duration)


def test_zero_field_is_inert(hydrogen):
    fld = DriveField(e0=0.0, omega0=0.0754, duration_cycles=5)
    traj = integrate(hydrogen, fld, IntegrationOptions(steps_per_cycle=512))
    pops = populations(traj)
    assert np.allclose(pops[:, 0], 1.0, atol=1e-13)
    assert np.allclose(pops[:, 1:], 0.0, atol=1e-13)
    assert traj.norm_max_deviation < 1e-13


def test_norm_conservation_short_run(hydrogen):
    traj = integrate(hydrogen, hydrogen_field(30),
                     IntegrationOptions(steps_per_cycle=4096))
    assert traj.norm_max_deviation <= 1e-8
    assert traj.quality_ok
    pops = populations(traj)
    assert np.abs(pops.sum(axis=1) - 1.0).max() <= 1e-8


def test_norm_error_raises(ion):
    # deliberately coarse step on the fast ion system
    fld = DriveField(e0=0.0995, omega0=0.0754235,
                     envelope=Envelope.sinsq_turnon(10), duration_cycles=150)
    with pytest.raises(IntegrationQualityError):
        integrate(ion, fld, IntegrationOptions(steps_per_cycle=256))


def test_quality_flag_between_thresholds(hydrogen):
    # drift in (1e-8, 1e-6]: flagged but not fatal
    fld = hydrogen_field(60)
    with pytest.warns(UserWarning):
        traj = integrate(hydrogen, fld, IntegrationOptions(steps_per_cycle=1024))
    assert not traj.quality_ok
    assert 1e-8 < traj.norm_max_deviation <= 1e-6


def test_rk4_convergence_order(hydrogen):
    import warnings
    fld = hydrogen_field(8)
    ref = integrate(hydrogen, fld, IntegrationOptions(
        steps_per_cycle=4096, store_per_cycle=1)).amplitudes[-1]

    def endpoint_error(steps):
        traj = integrate(hydrogen, fld, IntegrationOptions(
            steps_per_cycle=steps, store_per_cycle=1))
        return np.abs(traj.amplitudes[-1] - ref).max()

    with warnings.catch_warnings():        # coarse steps may trip the flag
        warnings.simplefilter("ignore")
        e_coarse = endpoint_error(256)
        e_fine = endpoint_error(512)
    ratio = e_coarse / e_fine
    assert 10.0 < ratio < 24.0, ratio      # fourth order: ~16x per halving


def test_gauge_invariance(hydrogen):
    fld = hydrogen_field(20)
    base = integrate(hydrogen, fld, IntegrationOptions(steps_per_cycle=8192))
    shifted = integrate(hydrogen, fld, IntegrationOptions(
        steps_per_cycle=8192, energy_offset=0.1))
    dp = np.abs(populations(base) - populations(shifted)).max()
    dd = np.abs(dipole_series(base).values - dipole_series(shifted).values).max()
    assert dp <= 1e-9
    assert dd <= 1e-9


def test_two_level_textbook_rabi(hydrogen):
    # resonant weak drive with the third state dropped
    omega0 = hydrogen.omega21
    rabi = 0.00375                       # Omega_R = mu12 e0
    fld = DriveField(e0=rabi / hydrogen.mu12, omega0=omega0,
                     duration_cycles=105.0)
    traj = integrate(hydrogen, fld, IntegrationOptions(drop_third=True))
    pops = populations(traj)
    expect = np.sin(0.5 * rabi * traj.times) ** 2
    assert np.abs(pops[:, 1] - expect).max() < 0.02
    assert np.all(pops[:, 2] == 0.0)


def test_initial_state_selection(hydrogen):
    fld = DriveField(e0=0.0, omega0=0.0754, duration_cycles=2)
    for state in (1, 2, 3):
        traj = integrate(hydrogen, fld, IntegrationOptions(
            steps_per_cycle=4096, initial_state=state))
        assert populations(traj)[-1, state - 1] == pytest.approx(1.0, abs=1e-9)


def test_dipole_identities(hydrogen):
    fld = hydrogen_field(20)
    traj = integrate(hydrogen, fld, IntegrationOptions(steps_per_cycle=2048))
    dip = dipole_series(traj)
    assert dip.values[0] == pytest.approx(0.0, abs=1e-12)   # b2(0) = b3(0) = 0
    assert np.isrealobj(dip.values)

    # invariant under a common phase rotation of all amplitudes
    rotated = traj.amplitudes * np.exp(1j * 0.73)
    d_rot = (2 * hydrogen.mu12 * (np.conj(rotated[:, 0]) * rotated[:, 1]).real
             + 2 * hydrogen.mu23 * (np.conj(rotated[:, 1]) * rotated[:, 2]).real)
    assert np.abs(d_rot - dip.values).max() < 1e-12

    # two-level mode: second term identically zero
    tl = integrate(hydrogen, fld, IntegrationOptions(
        steps_per_cycle=2048, drop_third=True))
    b = tl.amplitudes
    expect = 2 * hydrogen.mu12 * (np.conj(b[:, 0]) * b[:, 1]).real
    assert np.allclose(dipole_series(tl).values, expect, atol=1e-15)


def test_option_validation(hydrogen):
    with pytest.raises(ValueError):
        IntegrationOptions(steps_per_cycle=128)
    with pytest.raises(ValueError):
        IntegrationOptions(initial_state=4)
    guard = DriveField(e0=0.0, omega0=0.0754, duration_cycles=2e6)
    with pytest.raises(ValueError):
        integrate(hydrogen, guard, IntegrationOptions(steps_per_cycle=1024))


def test_csv_export_layout(hydrogen):
    fld = DriveField(e0=0.001, omega0=0.0754, duration_cycles=2)
    traj = integrate(hydrogen, fld, IntegrationOptions(
        steps_per_cycle=512, store_per_cycle=16))
    buf = io.StringIO()
    export_csv(traj, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t_au,re_b1,im_b1,re_b2,im_b2,re_b3,im_b3,p1,p2,p3,dipole"
    assert len(lines) == 1 + traj.times.size
    first = lines[1].split(",")
    assert len(first) == 11
    assert all("e" in cell for cell in first)    # %.12e scientific format
    # determinism: a second export is byte-identical
    buf2 = io.StringIO()
    export_csv(traj, buf2)
    assert buf.getvalue() == buf2.getvalue()


def test_cycle_average_and_trip():
    times = np.linspace(0.0, 100.0, 10001)
    period = 10.0
    mids, avg = cycle_average(times, np.sin(2 * np.pi * times / period), period)
    assert np.abs(avg).max() < 1e-3
    assert mids.size == 10


def test_excitation_timing_profile(hydrogen_fig_run):
    # headline run: excited population first tops 0.95 near ~112 cycles
    # and is back near zero when the ground state returns (~225 +- 15%)
    traj = hydrogen_fig_run
    pops = populations(traj)
    excited = pops[:, 1] + pops[:, 2]
    period = traj.drive.period
    first_hot = traj.times[int(np.nonzero(excited >= 0.95)[0][0])] / period
    assert 112 * 0.85 <= first_hot <= 112 * 1.15
    t_return, cycles_return = population_trip(traj)
    assert 225 * 0.85 <= cycles_return <= 225 * 1.15
    i_ret = int(np.searchsorted(traj.times, t_return))
    assert excited[i_ret] < 0.1


def test_population_trip_detector(hydrogen):
    fld = hydrogen_field(10)
    traj = integrate(hydrogen, fld, IntegrationOptions(steps_per_cycle=2048))
    with pytest.raises(ValueError):
        population_trip(traj)       # far too short: no excursion happens


def test_backends_agree(hydrogen):
    try:
        cy = load_backend("cython")
    except ImportError:
        pytest.skip("compiled core not built")
    py = load_backend("python")
    fld = hydrogen_field(3)
    n_steps = 3 * 512
    h = fld.period / 512
    store = np.arange(0, n_steps + 1, 64, dtype=np.int64)
    b0 = np.array([1.0, 0, 0], dtype=np.complex128)
    outs = []
    for impl in (cy, py):
        out = np.empty((store.size, 3), dtype=np.complex128)
        impl.rk4_propagate(0.0, hydrogen.omega21, hydrogen.omega31,
                           hydrogen.mu12 * fld.e0, hydrogen.mu23 * fld.e0,
                           fld.omega0, 1, 10.0, h, n_steps, b0, store, out)
        outs.append(out)
    assert np.abs(outs[0] - outs[1]).max() < 1e-13
