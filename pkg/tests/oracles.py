"""Brute-force summation oracles, independent of the package internals.

All Bessel values come from scipy.special.jv, not from gammares.specfun,
so these cross-check both the truncation policy and the Bessel core.
"""
from scipy.special import jv


def jv_signed(m, x):
    return jv(m, x) if m >= 0 else (-1) ** (-m) * jv(-m, x)


def oracle_stark(order, parity, mu_ratio, omega0, r, terms=500):
    """Dynamic Stark shifts by plain 500-term summation."""
    res = range(1, 2 * terms, 2) if parity == "odd" else range(2, 2 * terms + 1, 2)
    other = range(2, 2 * terms + 1, 2) if parity == "odd" else range(1, 2 * terms, 2)
    s_f = sum(n * n / (n * n - order * order) * jv(n, r) ** 2
              for n in res if n != order)
    s_g = sum(p * p / (p * p - order * order) * jv(p, r) ** 2 for p in other)
    pref = 2.0 * order * omega0 * mu_ratio ** 2
    return pref * s_f, pref * s_g


def oracle_neardeg(order, mu_ratio, omega32, omega0, r, terms=500):
    """Splitting shift, coupling correction and extra Stark shift."""
    delta = 0.5 * omega32 * (1.0 - jv(0, 2 * r))
    alpha = omega32 * mu_ratio * sum(
        jv(p, r) * jv_signed(p - order, 2 * r) * p / (p - order)
        for p in range(2, 2 * terms + 1, 2))
    s_h = sum(jv(n, 2 * r) ** 2 / (n * n) for n in range(1, 2 * terms, 2))
    stark_h = -0.5 * (omega32 / omega0) ** 2 * omega32 * jv(0, 2 * r) * s_h
    return delta, alpha, stark_h
