# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 propagation kernel (hot loop of the numerical branch).

Same stepping scheme and call signature as the pure-Python twin in
`gammares._core_py`; selected at import time by `gammares.kernels`.
Releases the GIL so independent propagations can run on threads.
"""
from libc.math cimport cos, sin, fabs, M_PI

BACKEND_NAME = "cython"

ENV_SQUARE = 0
ENV_SINSQ = 1


def rk4_propagate(double w1, double w2, double w3,
                  double om_r, double m_r, double omega0,
                  int env_kind, double turnon_cycles,
                  double h, long long n_steps,
                  double complex[::1] b_init,
                  long long[::1] store_at,
                  double complex[:, ::1] out):
    """See gammares._core_py.rk4_propagate for the contract."""
    cdef double complex b1 = b_init[0]
    cdef double complex b2 = b_init[1]
    cdef double complex b3 = b_init[2]
    cdef double complex d1a, d2a, d3a, d1b, d2b, d3b
    cdef double complex d1c, d2c, d3c, d1d, d2d, d3d
    cdef double complex x1, x2, x3
    cdef double complex I = 1j
    cdef double t, tm, te, a, f, c, om, m, dev, max_dev
    cdef double ramp_rate = 0.0
    cdef double half_pi = 0.5 * M_PI
    cdef double sixth = h / 6.0
    cdef double half = 0.5 * h
    cdef long long k, istore, n_store

    if env_kind == 1:
        ramp_rate = omega0 / (4.0 * turnon_cycles)

    n_store = store_at.shape[0]
    istore = 0
    max_dev = 0.0

    with nogil:
        if n_store > 0 and store_at[0] == 0:
            out[0, 0] = b1
            out[0, 1] = b2
            out[0, 2] = b3
            istore = 1

        for k in range(n_steps):
            t = k * h

            if env_kind == 0:
                f = 1.0
            else:
                a = ramp_rate * t
                f = sin(a) * sin(a) if a < half_pi else 1.0
            c = f * cos(omega0 * t)
            om = om_r * c
            m = m_r * c
            d1a = I * (om * b2 - w1 * b1)
            d2a = I * (om * b1 + m * b3 - w2 * b2)
            d3a = I * (m * b2 - w3 * b3)

            tm = t + half
            if env_kind == 0:
                f = 1.0
            else:
                a = ramp_rate * tm
                f = sin(a) * sin(a) if a < half_pi else 1.0
            c = f * cos(omega0 * tm)
            om = om_r * c
            m = m_r * c
            x1 = b1 + half * d1a
            x2 = b2 + half * d2a
            x3 = b3 + half * d3a
            d1b = I * (om * x2 - w1 * x1)
            d2b = I * (om * x1 + m * x3 - w2 * x2)
            d3b = I * (m * x2 - w3 * x3)

            x1 = b1 + half * d1b
            x2 = b2 + half * d2b
            x3 = b3 + half * d3b
            d1c = I * (om * x2 - w1 * x1)
            d2c = I * (om * x1 + m * x3 - w2 * x2)
            d3c = I * (m * x2 - w3 * x3)

            te = t + h
            if env_kind == 0:
                f = 1.0
            else:
                a = ramp_rate * te
                f = sin(a) * sin(a) if a < half_pi else 1.0
            c = f * cos(omega0 * te)
            om = om_r * c
            m = m_r * c
            x1 = b1 + h * d1c
            x2 = b2 + h * d2c
            x3 = b3 + h * d3c
            d1d = I * (om * x2 - w1 * x1)
            d2d = I * (om * x1 + m * x3 - w2 * x2)
            d3d = I * (m * x2 - w3 * x3)

            b1 = b1 + sixth * (d1a + 2.0 * (d1b + d1c) + d1d)
            b2 = b2 + sixth * (d2a + 2.0 * (d2b + d2c) + d2d)
            b3 = b3 + sixth * (d3a + 2.0 * (d3b + d3c) + d3d)

            dev = fabs(b1.real * b1.real + b1.imag * b1.imag
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
