"""Multiphoton excitation and harmonic generation in three-level
Gamma-type systems: exact amplitude-equation integration alongside the
analytic multiphoton-resonance machinery, each validating the other.
"""
from .model import (DriveField, Envelope, ThreeLevelSystem, derive_drive,
                    envelope_value, phase_phi, preset_system)
from .dynamics import (DipoleSeries, IntegrationOptions,
                       IntegrationQualityError, Trajectory, dipole_series,
                       integrate, populations)
from .analytic import (ResonanceParams, analytic_dipole, apply_fast_ripples,
                       full_trip_time, multiphoton_coupling, resonance_params,
                       rwa_trajectory, stark_shifts)
from .resonance import ResonanceSolution, scan_ratio, solve_resonance
from .spectrum import (PeakList, Spectrum, coherent_spectrum,
                       doublet_splittings, find_peaks, harmonic_components,
                       total_spectrum)
from .specfun import bessel_j, fourier_bessel_residual

__version__ = "0.1.0"
__all__ = [
    "DriveField", "Envelope", "ThreeLevelSystem", "derive_drive",
    "envelope_value", "phase_phi", "preset_system",
    "DipoleSeries", "IntegrationOptions", "IntegrationQualityError",
    "Trajectory", "dipole_series", "integrate", "populations",
    "ResonanceParams", "analytic_dipole", "apply_fast_ripples",
    "full_trip_time", "multiphoton_coupling", "resonance_params",
    "rwa_trajectory", "stark_shifts",
    "ResonanceSolution", "scan_ratio", "solve_resonance",
    "PeakList", "Spectrum", "coherent_spectrum", "doublet_splittings",
    "find_peaks", "harmonic_components", "total_spectrum",
    "bessel_j", "fourier_bessel_residual",
    "__version__",
]
