"""Direct O(n^4) quadrature of a chirped, possibly astigmatic, Fresnel kernel.

For every output sample ``r`` and source sample ``rho``::

    out(r) = sum_rho exp(i [beta |u|^2 + dbeta ((ux^2 - uy^2) cos 2a + 2 ux uy sin 2a)]) h(rho)
    u = r - rho,  a = axis angle at the source sample

No prefactors or ``dx^2`` weights are applied.  The compiled extension is used
when it imports; set ``QPLATESIM_BACKEND=numpy`` to force the fallback.  The
compiled kernel steps the phase along each output row by recurrence, so the
two backends agree to roughly 1e-12 relative rather than bit for bit.  Each
backend sums in a fixed order and is deterministic.
"""

from __future__ import annotations

import os

import numpy as np


def direct_sum_numpy(hx, hy, x, beta, dbeta, c2a, s2a):
    n = x.shape[0]
    jy, jx = np.nonzero((hx != 0) | (hy != 0))
    sx, sy = x[jx], x[jy]
    sc, ss = c2a[jy, jx], s2a[jy, jx]
    h = np.stack([hx[jy, jx], hy[jy, jx]], axis=1)
    out_x = np.zeros((n, n), dtype=complex)
    out_y = np.zeros((n, n), dtype=complex)
    dxs = x[:, None] - sx[None, :]
    for iy in range(n):
        dy = x[iy] - sy
        ph = beta * (dxs**2 + dy**2) + dbeta * ((dxs**2 - dy**2) * sc + 2 * dxs * dy * ss)
        row = np.exp(1j * ph) @ h
        out_x[iy] = row[:, 0]
        out_y[iy] = row[:, 1]
    return out_x, out_y


def _select():
    if os.environ.get("QPLATESIM_BACKEND", "").lower() == "numpy":
        return "numpy", direct_sum_numpy
    try:
        from ._core import direct_sum as compiled
    except ImportError:
        return "numpy", direct_sum_numpy
    return "compiled", compiled


BACKEND, _impl = _select()


def direct_sum(hx, hy, x, beta, dbeta, c2a, s2a):
    args = (
        np.ascontiguousarray(hx, dtype=complex),
        np.ascontiguousarray(hy, dtype=complex),
        np.ascontiguousarray(x, dtype=float),
        float(beta),
        float(dbeta),
        np.ascontiguousarray(c2a, dtype=float),
        np.ascontiguousarray(s2a, dtype=float),
    )
    return _impl(*args)
