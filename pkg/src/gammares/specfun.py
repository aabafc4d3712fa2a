"""Bessel functions of the first kind and the Fourier-Bessel identities.

Self-contained implementation (no scipy.special) so results are
bit-reproducible across platforms.  Two regimes:

* ascending power series where it is cancellation-free,
* Miller's downward recurrence normalized with J0 + 2*sum(J_{2k}) = 1
  everywhere else.

Contract domain is n in [0, 200], |x| <= 100; relative accuracy 1e-12
wherever the value is not denormally small.
"""
from __future__ import annotations

import math

_N_MAX = 200
_X_MAX = 100.0
# Below this the first series term already underflows; the true value is
# < 1e-290 and zero is within the absolute-error budget.
_LOG_TINY = -750.0


def bessel_j(n: int, x: float) -> float:
    """J_n(x) for integer order 0 <= n <= 200 and |x| <= 100."""
    if not isinstance(n, (int,)) or isinstance(n, bool):
        raise ValueError(f"order must be an integer, got {n!r}")
    if n < 0 or n > _N_MAX:
        raise ValueError(f"order out of domain [0, {_N_MAX}]: {n}")
    x = float(x)
    if not math.isfinite(x) or abs(x) > _X_MAX:
        raise ValueError(f"argument out of domain |x| <= {_X_MAX}: {x}")

    sign = -1.0 if (x < 0.0 and n % 2 == 1) else 1.0
    ax = abs(x)
    if ax == 0.0:
        return 1.0 if n == 0 else 0.0
    # Series is safe (monotone-decreasing terms, no cancellation) when
    # (x/2)^2 is comfortably below n+1.
    if 0.25 * ax * ax <= 0.5 * (n + 1):
        return sign * _series(n, ax)
    return sign * _miller(n, ax)


def _series(n: int, x: float) -> float:
    half = 0.5 * x
    if half == 0.0:                # denormal x: indistinguishable from 0
        return 1.0 if n == 0 else 0.0
    log_t0 = n * math.log(half) - math.lgamma(n + 1.0)
    if log_t0 < _LOG_TINY:
        return 0.0
    term = math.exp(log_t0)
    total = term
    q = half * half
    for k in range(1, 400):
        term *= -q / (k * (n + k))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
    return total


def _miller(n: int, x: float) -> float:
    # start far enough above max(n, x) that the downward error has decayed
    start = max(n, int(x)) + 60
    if start % 2 == 1:
        start += 1
    jp = 0.0           # J_{k+1}
    jc = 1e-30         # J_k (arbitrary seed)
    norm = 0.0         # accumulates J_0 + 2*sum J_{2k}
    result = 0.0
    for k in range(start, 0, -1):
        jm = (2.0 * k / x) * jc - jp
        jp = jc
        jc = jm
        if k - 1 == n:
            result = jc
        if (k - 1) % 2 == 0:
            norm += jc if k - 1 == 0 else 2.0 * jc
        if abs(jc) > 1e250:   # rescale to avoid overflow
            jc *= 1e-250
            jp *= 1e-250
            norm *= 1e-250
            result *= 1e-250
    return result / norm


def bessel_j_signed(n: int, x: float) -> float:
    """J_n(x) extended to negative integer order via J_{-m} = (-1)^m J_m."""
    if n < 0:
        value = bessel_j(-n, x)
        return -value if (-n) % 2 == 1 else value
    return bessel_j(n, x)


def fourier_bessel_residual(rho: float, alpha: float, kmax: int) -> tuple[float, float]:
    """Truncation residuals of the two harmonic expansions.

    Returns (|cos(rho sin a) - J0 - 2 sum_{k<=kmax} J_2k cos 2ka|,
             |sin(rho sin a) - 2 sum_{k<=kmax} J_{2k+1} sin (2k+1)a|).
    Self-test helper; not used on production paths.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    cos_sum = bessel_j(0, rho)
    for k in range(1, kmax + 1):
        cos_sum += 2.0 * bessel_j(2 * k, rho) * math.cos(2 * k * alpha)
    sin_sum = 0.0
    for k in range(0, kmax + 1):
        sin_sum += 2.0 * bessel_j(2 * k + 1, rho) * math.sin((2 * k + 1) * alpha)
    arg = rho * math.sin(alpha)
    return abs(math.cos(arg) - cos_sum), abs(math.sin(arg) - sin_sum)
