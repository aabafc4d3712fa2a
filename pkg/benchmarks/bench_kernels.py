#!/usr/bin/env python3
"""Benchmark the compiled RK4 kernel against the pure-Python fallback.

Runs the hydrogen five-photon operating point for a configurable number
of cycles on each available backend, checks that the endpoints agree,
and prints steps/second plus the speedup.

    python benchmarks/bench_kernels.py [--cycles 40] [--steps-per-cycle 4096]
"""
import argparse
import time

import numpy as np

from gammares.kernels import load_backend
from gammares.model import preset_system, DriveField, Envelope, derive_drive


def run_backend(impl, system, fld, steps_per_cycle):
    n_steps = int(round(fld.duration_cycles * steps_per_cycle))
    h = fld.period / steps_per_cycle
    store_at = np.array([0, n_steps], dtype=np.int64)
    out = np.empty((2, 3), dtype=np.complex128)
    b0 = np.array([1.0, 0.0, 0.0], dtype=np.complex128)
    drv = derive_drive(system, fld)
    t0 = time.perf_counter()
    dev = impl.rk4_propagate(0.0, system.omega21, system.omega31,
                             drv.rabi_omega, drv.rabi_m, fld.omega0,
                             1, fld.envelope.turnon_cycles, h, n_steps,
                             b0, store_at, out)
    elapsed = time.perf_counter() - t0
    return out[-1], dev, elapsed, n_steps


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cycles", type=float, default=40.0)
    ap.add_argument("--steps-per-cycle", type=int, default=4096)
    args = ap.parse_args()

    system = preset_system("hydrogen")
    omega0 = 0.0753777
    fld = DriveField(e0=1.5 * omega0 / 3.0, omega0=omega0,
                     envelope=Envelope.sinsq_turnon(10),
                     duration_cycles=args.cycles)

    results = {}
    for name in ("cython", "python"):
        try:
            impl = load_backend(name)
        except ImportError:
            print(f"{name:>7}: not available (extension not built)")
            continue
        endpoint, dev, elapsed, n_steps = run_backend(
            impl, system, fld, args.steps_per_cycle)
        rate = n_steps / elapsed
        results[name] = (endpoint, elapsed, rate)
        print(f"{name:>7}: {elapsed:8.3f} s  {rate:12.3e} steps/s  "
              f"norm drift {dev:.2e}")

    if len(results) == 2:
        diff = np.abs(results["cython"][0] - results["python"][0]).max()
        speedup = results["python"][1] / results["cython"][1]
        print(f"\nendpoint agreement |diff| = {diff:.3e}")
        print(f"speedup (cython over python) = {speedup:.1f}x")
        if diff > 1e-12:
            raise SystemExit("backends disagree beyond 1e-12")


if __name__ == "__main__":
    main()
