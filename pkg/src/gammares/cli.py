"""Command-line front end.

Subcommands: resonance, simulate, spectrum, compare, scan.  Configuration
comes from a JSON document (see README); results go out as CSV/JSON with
fixed formatting, so identical configs produce byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 integration-quality
failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from . import analytic, dynamics, resonance, spectrum as spec_mod
from .dynamics import IntegrationOptions, IntegrationQualityError
from .model import (DriveField, Envelope, ThreeLevelSystem, ENVELOPE_SQUARE,
                    envelope_from_dict, preset_system, system_from_dict)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_QUALITY = 3

METHODS = ("numeric", "rwa", "avetissian")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    system: ThreeLevelSystem
    field: DriveField
    method: str
    two_level: bool
    order: int | None
    parity: str | None
    steps_per_cycle: int | None
    store_per_cycle: int | None
    omega_max_harmonics: float
    rel_threshold: float
    min_separation: int
    output: dict

    def integration_options(self, **overrides) -> IntegrationOptions:
        kwargs = {}
        if self.steps_per_cycle:
            kwargs["steps_per_cycle"] = self.steps_per_cycle
        if self.store_per_cycle:
            kwargs["store_per_cycle"] = self.store_per_cycle
        kwargs.update(overrides)
        return IntegrationOptions(**kwargs)

    def params(self, **flags) -> analytic.ResonanceParams:
        if self.order is None:
            raise ConfigError("this operation needs a resonance directive "
                              "or an explicit 'order' key")
        return analytic.resonance_params(self.system, self.field, self.order,
                                         self.parity, **flags)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc

    try:
        system = system_from_dict(raw["system"])
    except KeyError:
        raise ConfigError("config needs a 'system' entry")
    if "duration_cycles" not in raw:
        raise ConfigError("config needs 'duration_cycles'")
    duration = float(raw["duration_cycles"])
    envelope = envelope_from_dict(raw.get("envelope"))

    field_spec = raw.get("field")
    if not isinstance(field_spec, dict):
        raise ConfigError("config needs a 'field' object")
    explicit = "e0" in field_spec or "omega0" in field_spec
    directive = "resonance" in field_spec
    if explicit == directive:
        raise ConfigError("field must give exactly one of (e0, omega0) "
                          "or a resonance directive")
    order = parity = None
    if directive:
        d = field_spec["resonance"]
        order = int(d["order"])
        parity = d.get("parity")
        sol = resonance.solve_resonance(
            system, order, parity, float(d.get("ratio", d.get("ratio_r", 1.0))),
            duration_cycles=duration)
        parity = sol.parity
        field = DriveField(e0=sol.e0, omega0=sol.omega0, envelope=envelope,
                           duration_cycles=duration)
    else:
        field = DriveField(e0=float(field_spec["e0"]),
                           omega0=float(field_spec["omega0"]),
                           envelope=envelope, duration_cycles=duration)
        if "order" in raw:
            order = int(raw["order"])
            parity = raw.get("parity")

    method = raw.get("method", "numeric")
    if method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}, got {method!r}")
    two_level = bool(raw.get("two_level", False))
    if method != "numeric":
        if envelope.kind != ENVELOPE_SQUARE:
            raise ConfigError(f"method {method!r} requires the square envelope")
        if two_level:
            raise ConfigError("two_level applies to the numeric method only")

    return RunConfig(
        system=system, field=field, method=method, two_level=two_level,
        order=order, parity=parity,
        steps_per_cycle=raw.get("steps_per_cycle"),
        store_per_cycle=raw.get("store_per_cycle"),
        omega_max_harmonics=float(raw.get("omega_max_harmonics", 12.0)),
        rel_threshold=float(raw.get("rel_threshold", 1e-3)),
        min_separation=int(raw.get("min_separation", 2)),
        output=raw.get("output", {}) or {},
    )


@contextmanager
def _open_out(path: str | None):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _trajectory_for(cfg: RunConfig):
    if cfg.method == "numeric":
        return dynamics.integrate(cfg.system, cfg.field,
                                  cfg.integration_options(drop_third=cfg.two_level))
    params = cfg.params()
    samples = cfg.store_per_cycle or dynamics.DEFAULT_STORE_PER_CYCLE
    n = int(round(cfg.field.duration_cycles * samples))
    times = np.arange(n + 1) * (cfg.field.period / samples)
    rwa = analytic.rwa_trajectory(params, cfg.system, cfg.field, times)
    if cfg.method == "rwa":
        return rwa
    return analytic.apply_fast_ripples(params, cfg.system, cfg.field, rwa)


def cmd_resonance(args) -> int:
    system = preset_system(args.system) if isinstance(args.system, str) else args.system
    sol = resonance.solve_resonance(
        system, args.order, args.parity, args.ratio,
        include_neardeg=not args.no_neardeg,
        include_avetissian=not args.no_avetissian,
        include_alpha=args.alpha)
    json.dump(sol.to_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    traj = _trajectory_for(cfg)
    with _open_out(args.output or cfg.output.get("trajectory")) as fh:
        dynamics.export_csv(traj, fh)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cfg = load_config(args.config)
    omega_max = cfg.omega_max_harmonics * cfg.field.omega0
    if args.analytic:
        params = cfg.params()
        samples = 128
        n = int(round(cfg.field.duration_cycles * samples))
        times = np.arange(n + 1) * (cfg.field.period / samples)
        dip = analytic.analytic_dipole(params, cfg.system, cfg.field, times)
    else:
        opts = cfg.integration_options(drop_third=cfg.two_level or args.two_level)
        traj = dynamics.integrate(cfg.system, cfg.field, opts)
        dip = dynamics.dipole_series(traj)
    sp = spec_mod.coherent_spectrum(dip, omega_max)
    peaks = spec_mod.find_peaks(sp, cfg.rel_threshold, cfg.min_separation,
                                use_intensity_s=args.s_normalized)
    with _open_out(args.out_spectrum or cfg.output.get("spectrum")) as fh:
        spec_mod.export_csv(sp, fh)
    out_peaks = args.out_peaks or cfg.output.get("peaks")
    if out_peaks in (None, "-"):
        sys.stdout.write(peaks.to_json() + "\n")
    else:
        with open(out_peaks, "w", encoding="utf-8") as fh:
            fh.write(peaks.to_json() + "\n")
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = load_config(args.config)
    params = cfg.params()
    traj = dynamics.integrate(cfg.system, cfg.field,
                              cfg.integration_options())
    p_num = dynamics.populations(traj)

    square = DriveField(e0=cfg.field.e0, omega0=cfg.field.omega0,
                        envelope=Envelope.square(),
                        duration_cycles=cfg.field.duration_cycles)
    dead = analytic.coupling_dead_time(params.order, cfg.system, cfg.field)
    shifted = np.clip(traj.times - dead, 0.0, None)
    rwa = analytic.rwa_trajectory(params, cfg.system, square, shifted)
    p_rwa = dynamics.populations(rwa)

    period = cfg.field.period
    _, p1n = dynamics.cycle_average(traj.times, p_num[:, 0], period)
    _, p1r = dynamics.cycle_average(traj.times, p_rwa[:, 0], period)
    rms = float(np.sqrt(np.mean((p1n - p1r) ** 2)))

    report = {
        "rms_population_deviation": rms,
        "trip_cycles_analytic": analytic.full_trip_time(params)[1],
        "ramp_dead_time_cycles": dead / period,
    }
    try:
        _, trip_num = dynamics.population_trip(traj)
        report["trip_cycles_numeric"] = trip_num
    except ValueError:
        report["trip_cycles_numeric"] = None

    omega_max = cfg.omega_max_harmonics * cfg.field.omega0
    sp_num = spec_mod.coherent_spectrum(dynamics.dipole_series(traj), omega_max)
    grid = np.arange(0, traj.times[-1], period / 128)
    sp_ana = spec_mod.coherent_spectrum(
        analytic.analytic_dipole(params, cfg.system, square, grid), omega_max)
    comp_num = spec_mod.harmonic_components(sp_num, cfg.rel_threshold)
    comp_ana = spec_mod.harmonic_components(sp_ana, cfg.rel_threshold)
    harm_num = sorted({p.nearest_odd_harmonic for p in comp_num})
    harm_ana = sorted({p.nearest_odd_harmonic for p in comp_ana})
    report["peaks"] = {
        "numeric_harmonics": harm_num,
        "analytic_harmonics": harm_ana,
        "numeric_only": sorted(set(harm_num) - set(harm_ana)),
        "analytic_only": sorted(set(harm_ana) - set(harm_num)),
        "numeric_count": len(comp_num),
        "analytic_count": len(comp_ana),
    }
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def cmd_scan(args) -> int:
    system = preset_system(args.system)
    rows = resonance.scan_ratio(system, args.order, args.parity,
                                args.rmin, args.rmax, args.steps)
    with _open_out(args.output) as fh:
        resonance.scan_to_csv(rows, fh)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gammares",
        description="Multiphoton resonance dynamics and spectra in "
                    "three-level Gamma systems (atomic units throughout).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resonance", help="solve a resonant operating point")
    p.add_argument("--system", required=True,
                   help="preset name (hydrogen, ion_a2_4plus)")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--parity", choices=("odd", "even"), default=None)
    p.add_argument("--ratio", type=float, required=True,
                   help="field-strength ratio |M_R|/omega0")
    p.add_argument("--no-neardeg", action="store_true")
    p.add_argument("--no-avetissian", action="store_true")
    p.add_argument("--alpha", action="store_true",
                   help="include the splitting coupling correction in a_eff")
    p.set_defaults(func=cmd_resonance)

    p = sub.add_parser("simulate", help="propagate and write a trajectory CSV")
    p.add_argument("--config", required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("spectrum", help="coherent spectrum CSV + peaks JSON")
    p.add_argument("--config", required=True)
    p.add_argument("--analytic", action="store_true",
                   help="use the closed-form dipole instead of integration")
    p.add_argument("--two-level", action="store_true",
                   help="drop the third state before integrating")
    p.add_argument("--s-normalized", action="store_true",
                   help="pick peaks on S(w) instead of S(w)/w^4")
    p.add_argument("--out-spectrum", default=None)
    p.add_argument("--out-peaks", default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("compare", help="numeric vs analytic cross-check report")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("scan", help="sweep the field-strength ratio")
    p.add_argument("--system", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--parity", choices=("odd", "even"), default=None)
    p.add_argument("--rmin", type=float, required=True)
    p.add_argument("--rmax", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_scan)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IntegrationQualityError as exc:
        print(f"integration quality failure: {exc}", file=sys.stderr)
        return EXIT_QUALITY
    except (ConfigError, ValueError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
