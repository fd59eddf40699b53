"""Transverse sampling grids, sampled fields, quadrature and spectral derivatives.

All lengths are in units of the vacuum wavelength, so the vacuum wavenumber
is exactly ``2*pi``.

Layout convention
-----------------
A grid with ``n`` samples per axis and half-extent ``half_width`` has spacing
``dx = 2*half_width/n`` and coordinates ``x_i = (i - n//2) * dx`` for
``i = 0..n-1``.  The origin is sampled (index ``n//2``) and every sample has its
mirror image except the single edge sample ``x_0 = -half_width``.  Arrays are
indexed ``[iy, ix]`` (rows are ``y``), matching ``numpy.meshgrid(x, x)``.

Transform convention
--------------------
``fourier_transform`` approximates the continuous transform
``F(k) = integral f(r) exp(-i k.r) d^2r`` by ``dx**2 * sum f exp(-i k.r)``.
Frequencies follow ``numpy.fft.fftfreq`` ordering, scaled to angular
wavenumbers.  Parseval then reads
``sum |f|^2 dx^2 == sum |F|^2 dk^2 / (2 pi)^2`` with ``dk = 2 pi / (n dx)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft as sfft

__all__ = [
    "Grid",
    "ScalarField",
    "VectorField",
    "make_grid",
    "quad_integral",
    "spectral_derivative",
    "fourier_transform",
    "inverse_fourier_transform",
    "energy",
]


def _frozen(a, dtype=complex):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Grid:
    """Square transverse grid centred on the optical axis."""

    n: int
    half_width: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise ValueError(f"n must be an integer, got {self.n!r}")
        if self.n < 8:
            raise ValueError(f"n must be >= 8, got {self.n}")
        if self.n % 2:
            raise ValueError(f"n must be even, got odd n={self.n}")
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "half_width", float(self.half_width))

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def center(self) -> int:
        """Index of the origin sample along either axis."""
        return self.n // 2

    @cached_property
    def x(self) -> np.ndarray:
        return _frozen((np.arange(self.n) - self.n // 2) * self.dx, float)

    @property
    def y(self) -> np.ndarray:
        return self.x

    @cached_property
    def k(self) -> np.ndarray:
        """Angular spatial frequencies in ``fftfreq`` order."""
        return _frozen(2 * np.pi * np.fft.fftfreq(self.n, d=self.dx), float)

    @property
    def dk(self) -> float:
        return 2 * np.pi / (self.n * self.dx)

    @cached_property
    def xx(self) -> np.ndarray:
        return _frozen(np.broadcast_to(self.x[None, :], (self.n, self.n)), float)

    @cached_property
    def yy(self) -> np.ndarray:
        return _frozen(np.broadcast_to(self.y[:, None], (self.n, self.n)), float)

    @cached_property
    def r(self) -> np.ndarray:
        return _frozen(np.hypot(self.xx, self.yy), float)

    @cached_property
    def phi(self) -> np.ndarray:
        """Azimuth in ``[-pi, pi)``, counterclockwise from +x."""
        return _frozen(azimuth(self.xx, self.yy), float)

    @cached_property
    def kx(self) -> np.ndarray:
        return _frozen(np.broadcast_to(self.k[None, :], (self.n, self.n)), float)

    @cached_property
    def ky(self) -> np.ndarray:
        return _frozen(np.broadcast_to(self.k[:, None], (self.n, self.n)), float)

    @property
    def diagonal(self) -> float:
        """Full diagonal length of the sampled square."""
        return 2 * np.sqrt(2) * self.half_width


def azimuth(x, y):
    """Azimuthal angle in ``[-pi, pi)``."""
    p = np.arctan2(y, x)
    return np.where(p >= np.pi, p - 2 * np.pi, p)


def make_grid(n: int, half_width: float) -> Grid:
    return Grid(n, half_width)


@dataclass(frozen=True, eq=False)
class ScalarField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        if v.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"values shape {v.shape} does not match grid n={self.grid.n}")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True, eq=False)
class VectorField:
    """Transverse field ``vx u_x + vy u_y`` sampled on one grid."""

    grid: Grid
    vx: np.ndarray
    vy: np.ndarray

    def __post_init__(self):
        shape = (self.grid.n, self.grid.n)
        vx, vy = _frozen(self.vx), _frozen(self.vy)
        if vx.shape != shape or vy.shape != shape:
            raise ValueError(f"component shapes {vx.shape}, {vy.shape} do not match grid n={self.grid.n}")
        object.__setattr__(self, "vx", vx)
        object.__setattr__(self, "vy", vy)

    @property
    def components(self):
        return self.vx, self.vy

    def scaled(self, c: complex) -> "VectorField":
        return VectorField(self.grid, c * self.vx, c * self.vy)

    def __add__(self, other: "VectorField") -> "VectorField":
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")
        return VectorField(self.grid, self.vx + other.vx, self.vy + other.vy)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + other.scaled(-1)


def quad_integral(f: ScalarField) -> complex:
    """Riemann sum ``sum f_ij dx^2``."""
    return complex(np.sum(f.values) * f.grid.dx**2)


def energy(f: VectorField) -> float:
    """Total power ``integral (|vx|^2 + |vy|^2) d^2r``."""
    dens = np.abs(f.vx) ** 2 + np.abs(f.vy) ** 2
    return float(np.sum(dens) * f.grid.dx**2)


def fourier_transform(values: np.ndarray, g: Grid) -> np.ndarray:
    """Continuous-normalised transform of centred samples (``fftfreq`` order)."""
    phase = _centre_phase(g)
    return sfft.fft2(values) * phase * g.dx**2


def inverse_fourier_transform(spectrum: np.ndarray, g: Grid) -> np.ndarray:
    phase = _centre_phase(g)
    return sfft.ifft2(spectrum / phase) / g.dx**2


def _centre_phase(g: Grid) -> np.ndarray:
    # sample i sits at (i - n//2) dx, i.e. a shift of -n//2 samples
    # exp(+i k_m (n//2) dx) = (-1)**m for even n
    s = np.where(np.arange(g.n) % 2, -1.0, 1.0)
    return s[:, None] * s[None, :]


def spectral_derivative(f: ScalarField, axis: str) -> ScalarField:
    """First derivative along ``"x"`` or ``"y"`` via multiplication by ``i k``.

    The Nyquist component is discarded so that real fields have real
    derivatives.
    """
    return ScalarField(f.grid, _dspec(f.values, f.grid, axis))


def _dspec(values: np.ndarray, g: Grid, axis: str) -> np.ndarray:
    k = np.array(g.k)
    k[g.n // 2] = 0.0
    if axis == "x":
        mult = 1j * k[None, :]
    elif axis == "y":
        mult = 1j * k[:, None]
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    return sfft.ifft2(mult * sfft.fft2(values))
