# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled direct-quadrature kernel for the extraordinary Fresnel integral.

Along an output row the phase is quadratic in the column index, so the
kernel is advanced by a second-order rotation recurrence instead of
evaluating sin/cos at every output sample.  The grid must be uniform.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()


cdef inline void _cis(double ph, double* re, double* im) noexcept nogil:
    re[0] = cos(ph)
    im[0] = sin(ph)


def direct_sum(const double complex[:, ::1] hx, const double complex[:, ::1] hy,
               const double[::1] x, double beta, double dbeta,
               const double[:, ::1] c2a, const double[:, ::1] s2a):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t iy, ix, j, ns
    cdef double h, dx0, dy, a, b, ph0, d1, d2
    cdef double er, ei, rr, ri, qr, qi, t
    cdef double hxr, hxi, hyr, hyi

    # compact list of sources carrying field
    src = [(jy, jx) for jy in range(n) for jx in range(n)
           if hx[jy, jx] != 0 or hy[jy, jx] != 0]
    ns = len(src)
    cdef double[::1] sx = np.empty(ns)
    cdef double[::1] sy = np.empty(ns)
    cdef double[::1] sc = np.empty(ns)
    cdef double[::1] ss = np.empty(ns)
    cdef double complex[::1] shx = np.empty(ns, dtype=np.complex128)
    cdef double complex[::1] shy = np.empty(ns, dtype=np.complex128)
    for j in range(ns):
        jy, jx = src[j]
        sx[j] = x[jx]
        sy[j] = x[jy]
        sc[j] = c2a[jy, jx]
        ss[j] = s2a[jy, jx]
        shx[j] = hx[jy, jx]
        shy[j] = hy[jy, jx]

    out = np.zeros((4, n, n))
    cdef double[:, :, ::1] acc = out
    h = x[1] - x[0] if n > 1 else 0.0

    with nogil:
        for iy in range(n):
            for j in range(ns):
                dy = x[iy] - sy[j]
                dx0 = x[0] - sx[j]
                # phase(dx) = a dx^2 + b dx + c
                a = beta + dbeta * sc[j]
                b = 2.0 * dbeta * ss[j] * dy
                ph0 = a * dx0 * dx0 + b * dx0 + (beta - dbeta * sc[j]) * dy * dy
                d1 = a * (2.0 * dx0 * h + h * h) + b * h
                d2 = 2.0 * a * h * h
                _cis(ph0, &er, &ei)
                _cis(d1, &rr, &ri)
                _cis(d2, &qr, &qi)
                hxr = shx[j].real
                hxi = shx[j].imag
                hyr = shy[j].real
                hyi = shy[j].imag
                for ix in range(n):
                    acc[0, iy, ix] += er * hxr - ei * hxi
                    acc[1, iy, ix] += er * hxi + ei * hxr
                    acc[2, iy, ix] += er * hyr - ei * hyi
                    acc[3, iy, ix] += er * hyi + ei * hyr
                    t = er * rr - ei * ri
                    ei = er * ri + ei * rr
                    er = t
                    t = rr * qr - ri * qi
                    ri = rr * qi + ri * qr
                    rr = t
    return out[0] + 1j * out[1], out[2] + 1j * out[3]
