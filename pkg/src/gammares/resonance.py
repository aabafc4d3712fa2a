"""Resonant operating-point solver.

Given a system, a multiphoton order K and the field-strength ratio
r = |M_R|/omega0, finds the carrier frequency omega0 and amplitude e0 at
which the Stark-corrected K-photon detuning vanishes.  Because every
Stark shift scales linearly with omega0 at fixed r, and the splitting
shift depends on r only, the condition closes in one division:

    omega0 = (omega_target +- Delta(r)) / (K + 2 s_f(r) + s_g(r))

with s_f, s_g the shift-to-omega0 ratios and the splitting shift Delta
entering with + for odd K (lower excited level targeted) and - for even.
"""
from __future__ import annotations

from dataclasses import dataclass, asdict

from . import analytic
from .analytic import PARITY_ODD, ResonanceParams
from .model import (DriveField, Envelope, ThreeLevelSystem,
                    INTENSITY_WCM2_PER_AU, derive_drive)


@dataclass(frozen=True)
class Applicability:
    a_over_omega: float
    rabi_eff_over_omega: float
    passed: bool
    near_boundary: bool


@dataclass(frozen=True)
class ResonanceSolution:
    system: ThreeLevelSystem
    order: int
    parity: str
    ratio_r: float
    omega0: float
    e0: float
    params: ResonanceParams
    applicability: Applicability

    @property
    def intensity_wcm2(self) -> float:
        return INTENSITY_WCM2_PER_AU * self.e0 ** 2

    def to_dict(self) -> dict:
        out = asdict(self)
        out["intensity_wcm2"] = self.intensity_wcm2
        return out


def solve_resonance(system: ThreeLevelSystem, order: int,
                    parity: str | None = None, ratio_r: float = 1.0, *,
                    include_neardeg: bool = True,
                    include_avetissian: bool = True,
                    include_alpha: bool = False,
                    duration_cycles: float = 1.0) -> ResonanceSolution:
    """Closed-form solve of the corrected resonance condition."""
    parity = parity or analytic.parity_of(order)
    analytic._check_parity(order, parity)
    if ratio_r == 0.0:
        raise ValueError("ratio_r must be nonzero")
    if system.mu23 == 0.0:
        raise ValueError("two-level systems (mu23 = 0) have no multiphoton "
                         "resonance machinery")
    r = abs(ratio_r)

    # dimensionless shift ratios: evaluate at a reference frequency and
    # divide out (both shifts are proportional to omega0 at fixed r)
    w_ref = 1.0
    fld_ref = DriveField(e0=r * w_ref / abs(system.mu23), omega0=w_ref,
                         envelope=Envelope.square(), duration_cycles=1.0)
    s_f, s_g = (s / w_ref for s in
                analytic.stark_shifts(order, parity, system, fld_ref))
    nd_delta, _, _ = analytic.near_degeneracy_corrections(
        order, parity, system, fld_ref)

    target = system.omega21 if parity == PARITY_ODD else system.omega31
    numerator = target
    if include_neardeg:
        numerator += nd_delta if parity == PARITY_ODD else -nd_delta
    denominator = order
    if include_avetissian:
        denominator += 2.0 * s_f + s_g
    if denominator <= 0.0:
        raise ValueError(f"unphysical resonance: K + Stark slope = {denominator:.3e}")
    omega0 = numerator / denominator
    e0 = r * omega0 / abs(system.mu23)

    fld = DriveField(e0=e0, omega0=omega0, envelope=Envelope.square(),
                     duration_cycles=duration_cycles)
    params = analytic.resonance_params(
        system, fld, order, parity,
        include_neardeg=include_neardeg,
        include_avetissian=include_avetissian,
        include_alpha=include_alpha)
    return ResonanceSolution(system=system, order=order, parity=parity,
                             ratio_r=derive_drive(system, fld).ratio_r,
                             omega0=omega0, e0=e0, params=params,
                             applicability=applicability_of(params))


def applicability_of(params: ResonanceParams,
                     limit: float = 0.1) -> Applicability:
    """Slow-coupling and Rabi-frequency checks |a_K|, A_K << omega0."""
    a_ratio = abs(params.a_k) / params.omega0
    rabi_ratio = params.rabi_eff / params.omega0
    worst = max(a_ratio, rabi_ratio)
    return Applicability(
        a_over_omega=a_ratio,
        rabi_eff_over_omega=rabi_ratio,
        passed=worst <= limit,
        near_boundary=0.9 * limit <= worst <= 1.1 * limit,
    )


def applicability(solution: ResonanceSolution) -> Applicability:
    return applicability_of(solution.params)


def scan_ratio(system: ThreeLevelSystem, order: int, parity: str | None,
               r_min: float, r_max: float, steps: int,
               **solve_kwargs) -> list[dict]:
    """One resonance solve per grid point of r in [r_min, r_max]."""
    if not (0.0 < r_min < r_max):
        raise ValueError("need 0 < r_min < r_max")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    rows = []
    for i in range(steps):
        r = r_min + (r_max - r_min) * i / (steps - 1)
        sol = solve_resonance(system, order, parity, r, **solve_kwargs)
        _, trip_cycles = analytic.full_trip_time(sol.params)
        rows.append({
            "r": r,
            "omega0_au": sol.omega0,
            "e0_au": sol.e0,
            "intensity_wcm2": sol.intensity_wcm2,
            "a_over_omega": sol.applicability.a_over_omega,
            "trip_cycles": trip_cycles,
        })
    return rows


SCAN_COLUMNS = ("r", "omega0_au", "e0_au", "intensity_wcm2",
                "a_over_omega", "trip_cycles")


def scan_to_csv(rows: list[dict], stream) -> None:
    stream.write(",".join(SCAN_COLUMNS) + "\n")
    for row in rows:
        stream.write(",".join("%.12e" % row[c] for c in SCAN_COLUMNS) + "\n")
