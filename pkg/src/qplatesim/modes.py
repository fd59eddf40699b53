"""Laguerre-Gaussian modes and polarized input beams.

Radial profile (waist plane, no Gouy or curvature factors)::

    LG_{l,p}(r, phi) = C (sqrt(2) r / w0)^|l| L_p^|l|(2 r^2 / w0^2) exp(-r^2 / w0^2) exp(i l phi)
    C = sqrt(2 p! / (pi (p + |l|)!)) / w0

with ``L_p^a`` the generalized Laguerre polynomial.  ``C`` gives unit L2 norm
in the continuum; the sampled mode is additionally divided by its measured
quadrature norm so that the discrete energy is one.  Positive ``l`` means the
phase increases counterclockwise from +x.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, sqrt

import numpy as np
from scipy.special import eval_genlaguerre

from .grid import Grid, ScalarField, VectorField, quad_integral

__all__ = [
    "LGIndex",
    "JonesVector",
    "BeamSpec",
    "lg_mode",
    "make_input_field",
    "spin_degree",
]

# a mode is resolved when its waist spans this many samples
MIN_SAMPLES_PER_WAIST = 8


@dataclass(frozen=True)
class LGIndex:
    ell: int
    p: int
    w0: float

    def __post_init__(self):
        if int(self.ell) != self.ell or int(self.p) != self.p:
            raise ValueError(f"ell and p must be integers, got ell={self.ell}, p={self.p}")
        if self.p < 0:
            raise ValueError(f"radial index p must be >= 0, got {self.p}")
        if not self.w0 > 0:
            raise ValueError(f"waist w0 must be positive, got {self.w0}")
        object.__setattr__(self, "ell", int(self.ell))
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "w0", float(self.w0))

    @property
    def effective_radius(self) -> float:
        """RMS radius of the intensity profile, ``w0 sqrt((2p + |l| + 1)/2)``."""
        return self.w0 * sqrt((2 * self.p + abs(self.ell) + 1) / 2)


@dataclass(frozen=True)
class JonesVector:
    """Normalised polarization amplitudes along ``u_x`` and ``u_y``."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        norm = abs(a) ** 2 + abs(b) ** 2
        if abs(norm - 1) > 1e-12:
            raise ValueError(f"Jones vector must have unit norm, |a|^2+|b|^2 = {norm!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def normalized(cls, a: complex, b: complex) -> "JonesVector":
        s = sqrt(abs(a) ** 2 + abs(b) ** 2)
        return cls(a / s, b / s)

    @classmethod
    def from_sigma(cls, sigma: float) -> "JonesVector":
        """Elliptical state ``(cos c, i sin c)`` with ``sin 2c = sigma``.

        ``sigma=0`` gives x-linear, ``+1`` gives ``(1, i)/sqrt(2)``.
        """
        if not -1 <= sigma <= 1:
            raise ValueError(f"sigma must lie in [-1, 1], got {sigma}")
        c = 0.5 * np.arcsin(sigma)
        return cls(np.cos(c), 1j * np.sin(c))


@dataclass(frozen=True)
class BeamSpec:
    lg: LGIndex
    pol: JonesVector


def spin_degree(pol: JonesVector) -> float:
    """``sigma = i (a b* - a* b)``; +1 for ``(1, i)/sqrt(2)``."""
    a, b = pol.a, pol.b
    return float((1j * (a * b.conjugate() - a.conjugate() * b)).real)


def _lg_profile(idx: LGIndex, r, phi):
    l = abs(idx.ell)
    s = 2 * r**2 / idx.w0**2
    c = sqrt(2 * factorial(idx.p) / (np.pi * factorial(idx.p + l))) / idx.w0
    radial = c * np.sqrt(s) ** l * eval_genlaguerre(idx.p, l, s) * np.exp(-s / 2)
    return radial * np.exp(1j * idx.ell * phi)


def lg_mode(idx: LGIndex, g: Grid) -> ScalarField:
    """Sampled, unit-energy ``LG_{l,p}`` at the waist plane."""
    if idx.w0 < MIN_SAMPLES_PER_WAIST * g.dx:
        raise ValueError(
            f"under-resolved mode: w0={idx.w0} < {MIN_SAMPLES_PER_WAIST}*dx={MIN_SAMPLES_PER_WAIST * g.dx}"
        )
    u = _lg_profile(idx, g.r, g.phi)
    norm = quad_integral(ScalarField(g, np.abs(u) ** 2)).real
    return ScalarField(g, u / np.sqrt(norm))


def make_input_field(spec: BeamSpec, g: Grid) -> VectorField:
    u = lg_mode(spec.lg, g).values
    return VectorField(g, spec.pol.a * u, spec.pol.b * u)
