"""Exact numerical integration of the three coupled amplitude equations.

The equations of motion for the amplitudes (b1, b2, b3), in the gauge
where the ground level energy is zero, are

    i db1/dt = omega1 b1 - Om(t) b2
    i db2/dt = omega2 b2 - Om(t) b1 - M(t) b3
    i db3/dt = omega3 b3 - M(t) b2

with Om(t) = mu12 E(t), M(t) = mu23 E(t).  Propagation is classic
fixed-step RK4 through :mod:`gammares.kernels`; this keeps the numerical
branch fully independent of the analytic approximations, so the two can
cross-validate each other.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import DriveField, ThreeLevelSystem, ENVELOPE_SQUARE

# RK4 slightly damps the norm of the fast components; this resolution
# keeps the damping below NORM_TOLERANCE even on the several-hundred-cycle
# full-inversion runs of both presets.
DEFAULT_STEPS_PER_CYCLE = 8192
# Output thinning target: plenty for populations and for spectra up to
# ~30x the carrier, while keeping multi-million-step runs lightweight.
DEFAULT_STORE_PER_CYCLE = 256

NORM_TOLERANCE = 1e-8
NORM_ERROR_LIMIT = 1e-6
MAX_TOTAL_STEPS = 10 ** 9


class IntegrationQualityError(RuntimeError):
    """Norm drift exceeded the hard limit; the step size is too coarse."""


@dataclass(frozen=True)
class IntegrationOptions:
    steps_per_cycle: int = DEFAULT_STEPS_PER_CYCLE
    drop_third: bool = False            # two-level comparison mode: M(t) = 0
    initial_state: int = 1
    store_per_cycle: int = DEFAULT_STORE_PER_CYCLE
    energy_offset: float = 0.0          # common shift of all level energies

    def __post_init__(self):
        if self.steps_per_cycle < 256:
            raise ValueError("steps_per_cycle must be >= 256")
        if self.initial_state not in (1, 2, 3):
            raise ValueError("initial_state must be 1, 2 or 3")
        if self.store_per_cycle < 1:
            raise ValueError("store_per_cycle must be >= 1")


@dataclass(frozen=True)
class Trajectory:
    """Stored time series of the three complex amplitudes."""
    times: np.ndarray                   # shape (n,), uniform, starts at 0
    amplitudes: np.ndarray              # shape (n, 3) complex
    system: ThreeLevelSystem
    drive: DriveField
    options: IntegrationOptions
    norm_max_deviation: float
    quality_ok: bool
    method: str = "numeric"

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


@dataclass(frozen=True)
class DipoleSeries:
    """Real induced-dipole time series on the trajectory grid."""
    times: np.ndarray
    values: np.ndarray
    omega0: float = 0.0


def integrate(system: ThreeLevelSystem, fld: DriveField,
              options: IntegrationOptions | None = None) -> Trajectory:
    """Propagate the amplitude equations over the full pulse."""
    opts = options or IntegrationOptions()
    n_steps = int(round(fld.duration_cycles * opts.steps_per_cycle))
    if n_steps < 1:
        raise ValueError("pulse shorter than one integration step")
    if n_steps > MAX_TOTAL_STEPS:
        raise ValueError(
            f"{n_steps} steps exceed the resource guard of {MAX_TOTAL_STEPS}")

    h = fld.period / opts.steps_per_cycle
    stride = max(1, opts.steps_per_cycle // opts.store_per_cycle)
    if opts.steps_per_cycle % stride:
        stride = 1
    store_at = np.arange(0, n_steps + 1, stride, dtype=np.int64)
    if store_at[-1] != n_steps:
        store_at = np.append(store_at, np.int64(n_steps))

    b_init = np.zeros(3, dtype=np.complex128)
    b_init[opts.initial_state - 1] = 1.0

    out = np.empty((store_at.size, 3), dtype=np.complex128)
    w1, w2, w3 = system.energies(opts.energy_offset)
    env = fld.envelope
    env_kind = kernels.ENV_SQUARE if env.kind == ENVELOPE_SQUARE else kernels.ENV_SINSQ
    rabi_m = 0.0 if opts.drop_third else system.mu23 * fld.e0

    max_dev = kernels.rk4_propagate(
        w1, w2, w3, system.mu12 * fld.e0, rabi_m, fld.omega0,
        env_kind, env.turnon_cycles, h, n_steps, b_init, store_at, out)

    if max_dev > NORM_ERROR_LIMIT:
        raise IntegrationQualityError(
            f"norm drifted by {max_dev:.3e} (> {NORM_ERROR_LIMIT:.0e}); "
            "increase steps_per_cycle")
    quality_ok = max_dev <= NORM_TOLERANCE
    if not quality_ok:
        warnings.warn(f"norm drift {max_dev:.3e} exceeds the "
                      f"{NORM_TOLERANCE:.0e} tolerance", stacklevel=2)

    return Trajectory(times=store_at * h, amplitudes=out, system=system,
                      drive=fld, options=opts, norm_max_deviation=max_dev,
                      quality_ok=quality_ok)


def populations(traj: Trajectory) -> np.ndarray:
    """|b_j(t)|^2 as an (n, 3) array."""
    return np.abs(traj.amplitudes) ** 2


def dipole_series(traj: Trajectory, system: ThreeLevelSystem | None = None) -> DipoleSeries:
    """Average induced dipole d(t) = 2 mu12 Re(b1* b2) + 2 mu23 Re(b2* b3)."""
    sys_ = system or traj.system
    b = traj.amplitudes
    d = (2.0 * sys_.mu12 * (np.conj(b[:, 0]) * b[:, 1]).real
         + 2.0 * sys_.mu23 * (np.conj(b[:, 1]) * b[:, 2]).real)
    return DipoleSeries(times=traj.times, values=d, omega0=traj.drive.omega0)


def export_csv(traj: Trajectory, stream, system: ThreeLevelSystem | None = None) -> None:
    """Write the trajectory in the interchange CSV layout.

    Columns: t_au, re_b1, im_b1, re_b2, im_b2, re_b3, im_b3, p1, p2, p3,
    dipole; all values in %.12e scientific format.
    """
    pops = populations(traj)
    dip = dipole_series(traj, system)
    b = traj.amplitudes
    stream.write("t_au,re_b1,im_b1,re_b2,im_b2,re_b3,im_b3,p1,p2,p3,dipole\n")
    fmt = ",".join(["%.12e"] * 11) + "\n"
    for i in range(traj.times.size):
        stream.write(fmt % (
            traj.times[i],
            b[i, 0].real, b[i, 0].imag,
            b[i, 1].real, b[i, 1].imag,
            b[i, 2].real, b[i, 2].imag,
            pops[i, 0], pops[i, 1], pops[i, 2],
            dip.values[i]))


def cycle_average(times: np.ndarray, values: np.ndarray, period: float) -> tuple[np.ndarray, np.ndarray]:
    """Boxcar average of `values` over whole drive cycles.

    Returns (cycle midpoints, per-cycle means); the trailing partial cycle
    is dropped.
    """
    dt = times[1] - times[0]
    per = max(1, int(round(period / dt)))
    n_cycles = (len(values) - 1) // per
    if n_cycles < 1:
        return times, values
    trimmed = values[:n_cycles * per].reshape(n_cycles, per)
    mids = times[:n_cycles * per].reshape(n_cycles, per).mean(axis=1)
    return mids, trimmed.mean(axis=1)


def population_trip(traj: Trajectory, return_level: float = 0.9,
                    dip_level: float = 0.5) -> tuple[float, float]:
    """Time of one full ground -> excited -> ground population excursion.

    Locates the deepest ground-state depletion (which must fall below
    `dip_level` to count as an excursion) and the first later time at
    which p1 recovers to `return_level`.  Returns (t_au, cycles); raises
    if there is no excursion or the population never recovers in the run.
    """
    p1 = populations(traj)[:, 0]
    imin = int(np.argmin(p1))
    if p1[imin] > dip_level:
        raise ValueError(f"no population excursion: min p1 = {p1[imin]:.3f} "
                         f"stays above {dip_level}")
    after = np.nonzero(p1[imin:] >= return_level)[0]
    if after.size == 0:
        raise ValueError("population does not return within the run; "
                         "extend duration_cycles")
    t_trip = float(traj.times[imin + after[0]])
    return t_trip, t_trip / traj.drive.period
