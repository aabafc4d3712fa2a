"""Pure-Python RK4 propagation kernel.

Fallback twin of the compiled extension `gammares._core`; identical
signature and stepping scheme, selected at import time by
`gammares.kernels` when the extension is unavailable (or when
GAMMARES_PURE_PYTHON is set).  Scalar complex arithmetic in a flat loop:
correct but roughly two orders of magnitude slower than the C version.
"""
from __future__ import annotations

import math

_HALF_PI = 0.5 * math.pi

ENV_SQUARE = 0
ENV_SINSQ = 1

BACKEND_NAME = "python"


def rk4_propagate(w1, w2, w3, om_r, m_r, omega0, env_kind, turnon_cycles,
                  h, n_steps, b_init, store_at, out):
    """Propagate the three complex amplitudes with classic fixed-step RK4.

    The equations of motion are i db1/dt = w1 b1 - Om(t) b2,
    i db2/dt = w2 b2 - Om(t) b1 - M(t) b3, i db3/dt = w3 b3 - M(t) b2 with
    Om(t) = om_r f(t) cos(omega0 t) and M(t) = m_r f(t) cos(omega0 t).

    Rows of `out` receive the amplitudes at the step indices listed in
    `store_at` (ascending, starting at 0).  Returns the maximum deviation
    of |b1|^2 + |b2|^2 + |b3|^2 from 1 seen at any step.
    """
    b1 = complex(b_init[0])
    b2 = complex(b_init[1])
    b3 = complex(b_init[2])

    sin = math.sin
    cos = math.cos
    ramp_rate = omega0 / (4.0 * turnon_cycles) if env_kind == ENV_SINSQ else 0.0
    sixth = h / 6.0
    half = 0.5 * h

    n_store = len(store_at)
    istore = 0
    if n_store and store_at[0] == 0:
        out[0, 0] = b1
        out[0, 1] = b2
        out[0, 2] = b3
        istore = 1

    max_dev = 0.0
    for k in range(n_steps):
        t = k * h

        # stage 1 at t
        if env_kind == ENV_SQUARE:
            f = 1.0
        else:
            a = ramp_rate * t
            f = sin(a) ** 2 if a < _HALF_PI else 1.0
        c = f * cos(omega0 * t)
        om = om_r * c
        m = m_r * c
        d1a = 1j * (om * b2 - w1 * b1)
        d2a = 1j * (om * b1 + m * b3 - w2 * b2)
        d3a = 1j * (m * b2 - w3 * b3)

        # stages 2 and 3 at t + h/2
        tm = t + half
        if env_kind == ENV_SQUARE:
            f = 1.0
        else:
            a = ramp_rate * tm
            f = sin(a) ** 2 if a < _HALF_PI else 1.0
        c = f * cos(omega0 * tm)
        om = om_r * c
        m = m_r * c
        x1 = b1 + half * d1a
        x2 = b2 + half * d2a
        x3 = b3 + half * d3a
        d1b = 1j * (om * x2 - w1 * x1)
        d2b = 1j * (om * x1 + m * x3 - w2 * x2)
        d3b = 1j * (m * x2 - w3 * x3)

        x1 = b1 + half * d1b
        x2 = b2 + half * d2b
        x3 = b3 + half * d3b
        d1c = 1j * (om * x2 - w1 * x1)
        d2c = 1j * (om * x1 + m * x3 - w2 * x2)
        d3c = 1j * (m * x2 - w3 * x3)

        # stage 4 at t + h
        te = t + h
        if env_kind == ENV_SQUARE:
            f = 1.0
        else:
            a = ramp_rate * te
            f = sin(a) ** 2 if a < _HALF_PI else 1.0
        c = f * cos(omega0 * te)
        om = om_r * c
        m = m_r * c
        x1 = b1 + h * d1c
        x2 = b2 + h * d2c
        x3 = b3 + h * d3c
        d1d = 1j * (om * x2 - w1 * x1)
        d2d = 1j * (om * x1 + m * x3 - w2 * x2)
        d3d = 1j * (m * x2 - w3 * x3)

        b1 = b1 + sixth * (d1a + 2.0 * (d1b + d1c) + d1d)
        b2 = b2 + sixth * (d2a + 2.0 * (d2b + d2c) + d2d)
        b3 = b3 + sixth * (d3a + 2.0 * (d3b + d3c) + d3d)

        dev = abs(b1.real * b1.real + b1.imag * b1.imag
                  + b2.real * b2.real + b2.imag * b2.imag
                  + b3.real * b3.real + b3.imag * b3.imag - 1.0)
        if dev > max_dev:
            max_dev = dev

        if istore < n_store and store_at[istore] == k + 1:
            out[istore, 0] = b1
            out[istore, 1] = b2
            out[istore, 2] = b3
            istore += 1

    return max_dev
