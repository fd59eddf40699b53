"""Homogeneous uniaxial media: dispersion relations and the angular-spectrum propagator.

The optical axis lies in the transverse plane at angle ``alpha`` from +x, so
there is no walk-off.  Absorption is neglected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .grid import VectorField
from .jones import apply, local_flip_matrix

__all__ = [
    "K0",
    "UniaxialMedium",
    "k_oz",
    "k_ez",
    "homogeneous_propagator",
    "propagate_homogeneous",
]

K0 = 2 * np.pi  # vacuum wavenumber with lengths in wavelengths


@dataclass(frozen=True)
class UniaxialMedium:
    """Ordinary/extraordinary indices and plate thickness ``d`` (wavelengths).

    Chirp rates of the paraxial kernels::

        beta_o  = k0 n_o / (2 d)
        beta_e  = k0 (n_o^2 + n_e^2) / (4 n_e d)
        dbeta_e = k0 (n_o^2 - n_e^2) / (4 n_e d)

    ``beta_e +/- dbeta_e`` are the chirps along and across the optical axis.
    """

    n_o: float
    n_e: float
    d: float

    def __post_init__(self):
        for name in ("n_o", "n_e", "d"):
            v = getattr(self, name)
            if not v > 0:
                raise ValueError(f"{name} must be positive, got {v}")
            object.__setattr__(self, name, float(v))

    k0 = K0

    @property
    def beta_o(self) -> float:
        return K0 * self.n_o / (2 * self.d)

    @property
    def beta_e(self) -> float:
        return K0 * (self.n_o**2 + self.n_e**2) / (4 * self.n_e * self.d)

    @property
    def dbeta_e(self) -> float:
        return K0 * (self.n_o**2 - self.n_e**2) / (4 * self.n_e * self.d)

    @property
    def beta_ratio(self) -> float:
        """``beta_o / beta_e = 2 n_o n_e / (n_o^2 + n_e^2)``, at most one."""
        return 2 * self.n_o * self.n_e / (self.n_o**2 + self.n_e**2)

    @property
    def retardance(self) -> float:
        """``k0 |n_o - n_e| d``."""
        return K0 * abs(self.n_o - self.n_e) * self.d

    def with_thickness(self, d: float) -> "UniaxialMedium":
        return UniaxialMedium(self.n_o, self.n_e, d)


def _csqrt(x):
    return np.sqrt(np.asarray(x, dtype=complex))


def k_oz(kx, ky, m: UniaxialMedium, paraxial: bool = False):
    """Ordinary longitudinal wavenumber; positive-imaginary when evanescent."""
    q2 = np.asarray(kx) ** 2 + np.asarray(ky) ** 2
    kn = K0 * m.n_o
    if paraxial:
        return (kn - q2 / (2 * kn)) + 0j
    return _csqrt(kn**2 - q2)


def k_ez(kx, ky, alpha, m: UniaxialMedium, paraxial: bool = False):
    """Extraordinary longitudinal wavenumber for axis angle ``alpha``."""
    kx, ky = np.asarray(kx), np.asarray(ky)
    k_par = kx * np.cos(alpha) + ky * np.sin(alpha)
    k_perp = kx * np.sin(alpha) - ky * np.cos(alpha)
    t = k_par**2 * m.n_e**2 / m.n_o**2 + k_perp**2
    kn = K0 * m.n_e
    if paraxial:
        return (kn - t / (2 * kn)) + 0j
    return _csqrt(kn**2 - t)


def homogeneous_propagator(kx, ky, alpha, z, m: UniaxialMedium, paraxial: bool = False):
    """Angular-spectrum Jones matrix ``U_alpha(q, z)``, shape ``(..., 2, 2)``.

    ``paraxial=True`` replaces both square roots by their second-order
    expansion in ``|q|``.
    """
    eo = np.exp(1j * k_oz(kx, ky, m, paraxial) * z)
    ee = np.exp(1j * k_ez(kx, ky, alpha, m, paraxial) * z)
    plus, minus = 0.5 * (ee + eo), 0.5 * (ee - eo)
    flip = local_flip_matrix(np.broadcast_to(alpha, np.shape(plus)))
    eye = np.eye(2)
    return plus[..., None, None] * eye + minus[..., None, None] * flip


def propagate_homogeneous(f: VectorField, alpha: float, z: float, m: UniaxialMedium,
                          paraxial: bool = False) -> VectorField:
    """Propagate through a distance ``z`` of medium with a uniform axis.

    Uses the periodic DFT directly; the caller keeps the field away from the
    grid edge.
    """
    g = f.grid
    u = homogeneous_propagator(g.kx, g.ky, alpha, z, m, paraxial)
    sx, sy = apply(u, sfft.fft2(f.vx), sfft.fft2(f.vy))
    return VectorField(g, sfft.ifft2(sx), sfft.ifft2(sy))
