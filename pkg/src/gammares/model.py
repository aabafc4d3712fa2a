"""Physical system, drive field, derived Rabi quantities and the field
phase integral.

All quantities are in atomic units (hbar = e = m_e = 1).  Energies are
gauged so the ground level sits at 0, i.e. the three level energies are
(0, omega21, omega21 + omega32).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

import numpy as np

# unit helpers (a.u. <-> lab units)
HARTREE_EV = 27.211386245988
AU_TIME_PS = 2.4188843265857e-5          # one a.u. of time in picoseconds
INTENSITY_WCM2_PER_AU = 3.50945e16       # I [W/cm^2] = const * (E0 [a.u.])^2

ENVELOPE_SQUARE = "square"
ENVELOPE_SINSQ = "sinsq_turnon"


@dataclass(frozen=True)
class ThreeLevelSystem:
    """Level spacings and dipole matrix elements of a Gamma configuration.

    omega21   excitation energy of the lower excited state (a.u.)
    omega32   splitting of the excited pair (0 for exact degeneracy)
    mu12      dipole matrix element <1|ez|2> (a.u.)
    mu23      dipole matrix element <2|ez|3> (a.u.); 0 switches the model
              to its two-level reduction
    """
    omega21: float
    omega32: float
    mu12: float
    mu23: float
    label: str = ""

    def __post_init__(self):
        if not self.omega21 > 0:
            raise ValueError(f"omega21 must be positive, got {self.omega21}")
        if abs(self.omega32) >= self.omega21:
            raise ValueError("level splitting |omega32| must be below omega21")
        if self.mu12 == 0:
            raise ValueError("mu12 must be nonzero")

    @property
    def omega31(self) -> float:
        return self.omega21 + self.omega32

    def energies(self, offset: float = 0.0) -> tuple[float, float, float]:
        """Level energies (omega1, omega2, omega3) with an optional common shift."""
        return (offset, offset + self.omega21, offset + self.omega31)

    @property
    def mu_ratio(self) -> float:
        return self.mu12 / self.mu23 if self.mu23 != 0.0 else math.inf


@dataclass(frozen=True)
class Envelope:
    """Pulse turn-on profile: flat square or capped sin^2 ramp."""
    kind: str = ENVELOPE_SQUARE
    turnon_cycles: float = 0.0

    def __post_init__(self):
        if self.kind not in (ENVELOPE_SQUARE, ENVELOPE_SINSQ):
            raise ValueError(f"unknown envelope kind {self.kind!r}")
        if self.kind == ENVELOPE_SINSQ and not self.turnon_cycles > 0:
            raise ValueError("sinsq_turnon needs turnon_cycles > 0")

    @classmethod
    def square(cls) -> "Envelope":
        return cls(ENVELOPE_SQUARE)

    @classmethod
    def sinsq_turnon(cls, turnon_cycles: float) -> "Envelope":
        return cls(ENVELOPE_SINSQ, float(turnon_cycles))


@dataclass(frozen=True)
class DriveField:
    """Linearly polarized drive E(t) = e0 f(t) cos(omega0 t)."""
    e0: float
    omega0: float
    envelope: Envelope = field(default_factory=Envelope.square)
    duration_cycles: float = 1.0

    def __post_init__(self):
        if self.e0 < 0:
            raise ValueError("field amplitude e0 must be >= 0")
        if not self.omega0 > 0:
            raise ValueError("carrier frequency omega0 must be positive")
        if not self.duration_cycles > 0:
            raise ValueError("duration_cycles must be positive")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega0

    @property
    def t_pulse(self) -> float:
        return self.duration_cycles * self.period


@dataclass(frozen=True)
class DerivedDrive:
    rabi_omega: float   # mu12 * e0
    rabi_m: float       # mu23 * e0
    ratio_r: float      # rabi_m / omega0
    mu_ratio: float     # rabi_omega / rabi_m = mu12 / mu23
    period: float


def preset_system(name: str) -> ThreeLevelSystem:
    """The two bundled systems: atomic hydrogen (1S, 2P, 2S) and the
    evenly charged homonuclear diatomic ion A2 4+ at 3.5 a.u. separation."""
    key = name.strip().lower()
    if key == "hydrogen":
        return ThreeLevelSystem(omega21=0.375, omega32=0.0,
                                mu12=0.745, mu23=-3.0, label="hydrogen")
    if key in ("ion_a2_4plus", "ion"):
        return ThreeLevelSystem(omega21=0.6685, omega32=0.0167,
                                mu12=0.503, mu23=3.033, label="ion_a2_4plus")
    raise ValueError(f"unknown preset {name!r} (known: hydrogen, ion_a2_4plus)")


def derive_drive(system: ThreeLevelSystem, fld: DriveField) -> DerivedDrive:
    rabi_omega = system.mu12 * fld.e0
    rabi_m = system.mu23 * fld.e0
    return DerivedDrive(
        rabi_omega=rabi_omega,
        rabi_m=rabi_m,
        ratio_r=rabi_m / fld.omega0,
        mu_ratio=system.mu_ratio,
        period=fld.period,
    )


def envelope_value(env: Envelope, omega0: float, t):
    """f(t) in [0, 1]; `t` may be a scalar or an array, must be >= 0."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise ValueError("envelope time must be >= 0")
    if env.kind == ENVELOPE_SQUARE:
        out = np.ones_like(arr)
    else:
        arg = omega0 * arr / (4.0 * env.turnon_cycles)
        out = np.where(arg < 0.5 * math.pi, np.sin(arg) ** 2, 1.0)
    return float(out) if np.isscalar(t) or arr.ndim == 0 else out


def phase_phi(system: ThreeLevelSystem, fld: DriveField, t: float,
              steps_per_cycle: int = 1024) -> float:
    """Field phase integral phi(t) = integral_0^t M(t') dt' with
    M(t) = mu23 e0 f(t) cos(omega0 t).

    Square envelope has the closed form (M_R/omega0) sin(omega0 t); ramped
    envelopes are integrated by composite Simpson quadrature on the
    simulation grid.
    """
    if t < 0:
        raise ValueError("time must be >= 0")
    drv = derive_drive(system, fld)
    if fld.envelope.kind == ENVELOPE_SQUARE:
        return drv.ratio_r * math.sin(fld.omega0 * t)
    if t == 0.0 or drv.rabi_m == 0.0:
        return 0.0
    h = fld.period / steps_per_cycle
    n = max(2, 2 * math.ceil(t / (2.0 * h)))    # even panel count
    grid = np.linspace(0.0, t, n + 1)
    m_vals = drv.rabi_m * envelope_value(fld.envelope, fld.omega0, grid) \
        * np.cos(fld.omega0 * grid)
    hh = t / n
    odd = m_vals[1:-1:2].sum()
    even = m_vals[2:-1:2].sum()
    return float(hh / 3.0 * (m_vals[0] + 4.0 * odd + 2.0 * even + m_vals[-1]))


def system_to_dict(system: ThreeLevelSystem) -> dict:
    return asdict(system)


def system_from_dict(data) -> ThreeLevelSystem:
    """Accepts a preset name or a mapping with the JSON-config keys."""
    if isinstance(data, str):
        return preset_system(data)
    known = {"omega21", "omega32", "mu12", "mu23", "label"}
    extra = set(data) - known
    if extra:
        raise ValueError(f"unknown system keys: {sorted(extra)}")
    return ThreeLevelSystem(
        omega21=float(data["omega21"]),
        omega32=float(data.get("omega32", 0.0)),
        mu12=float(data["mu12"]),
        mu23=float(data.get("mu23", 0.0)),
        label=str(data.get("label", "")),
    )


def envelope_from_dict(data) -> Envelope:
    if data is None:
        return Envelope.square()
    kind = data.get("type", ENVELOPE_SQUARE)
    if kind == ENVELOPE_SQUARE:
        return Envelope.square()
    if kind == ENVELOPE_SINSQ:
        return Envelope.sinsq_turnon(float(data["turnon_cycles"]))
    raise ValueError(f"unknown envelope type {kind!r}")


def envelope_to_dict(env: Envelope) -> dict:
    if env.kind == ENVELOPE_SQUARE:
        return {"type": ENVELOPE_SQUARE}
    return {"type": ENVELOPE_SINSQ, "turnon_cycles": env.turnon_cycles}


def field_from_dict(data, duration_cycles=None, envelope=None) -> DriveField:
    return DriveField(
        e0=float(data["e0"]),
        omega0=float(data["omega0"]),
        envelope=envelope if envelope is not None
        else envelope_from_dict(data.get("envelope")),
        duration_cycles=float(data["duration_cycles"]
                              if duration_cycles is None else duration_cycles),
    )
