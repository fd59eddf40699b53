"""Plates whose optical axis winds azimuthally, ``alpha(phi) = q phi + alpha0``.

The output face field is

    E(r) = (k0 n_o / (2 pi i d)) integral d^2rho { (F_e + F_o)/2 + (F_e - F_o)/2 M(alpha) } E0(rho)

with ``M(alpha) = R(alpha) sigma_z R(-alpha)``.  Writing ``P_e = (1 + M)/2`` and
``P_o = (1 - M)/2`` (projectors onto the local axis and its normal), this is
one ordinary and one extraordinary propagation applied to the two projected
fields, which is how it is evaluated here.

Conventions worth knowing:

* ``alpha`` is taken at the source point ``rho``: the plate acts on the
  field where the field enters it.
* For ``q != 0`` the origin sample sits on the axis defect, where ``alpha`` is
  undefined.  That sample is treated as an isotropic core of mean phase
  ``(delta_o + delta_e)/2``; it converts no polarization.  In the Fresnel modes
  it propagates with the geometric mean of the ordinary and extraordinary
  transfer functions.
* The approximated extraordinary kernel is rescaled to unit DC gain by
  default (``normalization="unit"``).  ``normalization="common"`` keeps the
  common ``k0 n_o/(2 pi i d)`` prefactor, which gives that kernel a DC gain of
  ``beta_o/beta_e`` and loses ``(1 - (beta_o/beta_e)^2)/2`` of the power of a
  circularly polarized beam.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from . import _direct
from .grid import Grid, VectorField
from .jones import apply, local_flip_matrix
from .media import K0, UniaxialMedium

__all__ = [
    "QPlateSpec",
    "KernelMode",
    "DiscontinuousAxisWarning",
    "axis_angle",
    "local_flip_matrix",
    "thin_element_apply",
    "fresnel_kernel_ordinary",
    "fresnel_kernel_extraordinary",
    "qplate_propagate",
    "fresnel_sampling_ok",
    "resolve_method",
    "astigmatism_ratio",
    "EXACT_MAX_N",
]

EXACT_MAX_N = 96
ASTIGMATISM_WARN = 0.1


class DiscontinuousAxisWarning(UserWarning):
    """Axis pattern has discontinuity lines (``2q`` not an integer)."""


class KernelMode(enum.Enum):
    THIN = "thin"
    APPROX = "approx"
    EXACT = "exact"

    @classmethod
    def parse(cls, value) -> "KernelMode":
        if isinstance(value, cls):
            return value
        aliases = {
            "thin": cls.THIN, "thinelement": cls.THIN,
            "approx": cls.APPROX, "approxfresnel": cls.APPROX,
            "exact": cls.EXACT, "exactfresnel": cls.EXACT,
        }
        try:
            return aliases[str(value).lower().replace("_", "")]
        except KeyError:
            raise ValueError(f"unknown kernel mode {value!r}") from None


@dataclass(frozen=True)
class QPlateSpec:
    q: float
    alpha0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "q", float(self.q))
        object.__setattr__(self, "alpha0", float(self.alpha0))
        if not self.continuous_axis:
            warnings.warn(
                f"q={self.q}: 2q is not an integer, the axis pattern has discontinuity lines",
                DiscontinuousAxisWarning,
                stacklevel=3,
            )

    @property
    def continuous_axis(self) -> bool:
        return float(2 * self.q).is_integer()

    @property
    def has_defect(self) -> bool:
        return self.q != 0


def axis_angle(plate: QPlateSpec, phi):
    return plate.q * np.asarray(phi) + plate.alpha0


def _defect_mask(plate: QPlateSpec, g: Grid) -> np.ndarray:
    mask = np.zeros((g.n, g.n), dtype=bool)
    if plate.has_defect:
        mask[g.center, g.center] = True
    return mask


def thin_element_apply(f: VectorField, plate: QPlateSpec, m: UniaxialMedium) -> VectorField:
    """Zero-diffraction limit: a local retarder at every sample."""
    g = f.grid
    d_o, d_e = K0 * m.n_o * m.d, K0 * m.n_e * m.d
    plus = 0.5 * (np.exp(1j * d_e) + np.exp(1j * d_o))
    minus = 0.5 * (np.exp(1j * d_e) - np.exp(1j * d_o))
    flip = local_flip_matrix(axis_angle(plate, g.phi))
    gx, gy = apply(flip, f.vx, f.vy)
    ox = plus * f.vx + minus * gx
    oy = plus * f.vy + minus * gy
    core = _defect_mask(plate, g)
    if core.any():
        mean = np.exp(0.5j * (d_o + d_e))
        ox = np.where(core, mean * f.vx, ox)
        oy = np.where(core, mean * f.vy, oy)
    return VectorField(g, ox, oy)


def _sep2(r, phi, rho, varphi):
    return r**2 + rho**2 - 2 * r * rho * np.cos(phi - varphi)


def fresnel_kernel_ordinary(r, phi, rho, varphi, m: UniaxialMedium):
    return np.exp(1j * K0 * m.n_o * m.d + 1j * m.beta_o * _sep2(r, phi, rho, varphi))


def fresnel_kernel_extraordinary(r, phi, rho, varphi, plate: QPlateSpec, m: UniaxialMedium,
                                 exact: bool = True):
    """Extraordinary kernel with the axis taken at the source azimuth ``varphi``."""
    ph = K0 * m.n_e * m.d + m.beta_e * _sep2(r, phi, rho, varphi)
    if exact:
        a = axis_angle(plate, varphi)
        astig = (r**2 * np.cos(2 * (a - phi)) + rho**2 * np.cos(2 * (a - varphi))
                 - 2 * r * rho * np.cos(2 * a - phi - varphi))
        ph = ph + m.dbeta_e * astig
    return np.exp(1j * ph)


def astigmatism_ratio(m: UniaxialMedium) -> float:
    """``|dbeta_e| / beta_e``; the approximated kernel assumes this is small."""
    return abs(m.dbeta_e) / m.beta_e


def fresnel_sampling_ok(beta: float, g: Grid) -> bool:
    """Real-space chirp sampling criterion ``beta * dx * diagonal < pi``."""
    return beta * g.dx * g.diagonal < np.pi


@dataclass(frozen=True)
class _Chirp:
    """Isotropic paraxial kernel ``gain * exp(i delta) * (beta/(pi i)) exp(i beta |u|^2)``."""

    beta: float
    delta: float
    gain: float = 1.0

    def transfer(self, k2):
        return self.gain * np.exp(1j * self.delta - 1j * k2 / (4 * self.beta))

    def real_space(self, u2, dx):
        pref = self.gain * self.beta / (np.pi * 1j) * dx**2
        return pref * np.exp(1j * (self.delta + self.beta * u2))


def _kernels(m: UniaxialMedium, normalization: str):
    d_o, d_e = K0 * m.n_o * m.d, K0 * m.n_e * m.d
    if normalization == "unit":
        gain_e = 1.0
    elif normalization == "common":
        gain_e = m.beta_ratio
    else:
        raise ValueError(f"normalization must be 'unit' or 'common', got {normalization!r}")
    ordinary = _Chirp(m.beta_o, d_o)
    extraordinary = _Chirp(m.beta_e, d_e, gain_e)
    # harmonic-mean chirp = geometric mean of the two transfer functions
    core = _Chirp(2 / (1 / m.beta_o + 1 / m.beta_e), 0.5 * (d_o + d_e))
    return ordinary, extraordinary, core


def resolve_method(m: UniaxialMedium, g: Grid, method: str = "auto") -> str:
    """Pick ``"direct"`` (sampled real-space kernel) or ``"transfer"`` (Fourier form)."""
    if method in ("direct", "transfer"):
        return method
    if method != "auto":
        raise ValueError(f"method must be 'auto', 'direct' or 'transfer', got {method!r}")
    beta = max(m.beta_o, m.beta_e + abs(m.dbeta_e))
    return "direct" if fresnel_sampling_ok(beta, g) else "transfer"


class _Convolver:
    """Zero-padded (factor 2) linear convolution on one grid."""

    def __init__(self, g: Grid, method: str):
        self.g, self.method = g, method
        n2 = 2 * g.n
        if method == "transfer":
            k = 2 * np.pi * np.fft.fftfreq(n2, d=g.dx)
            self._k2 = k[None, :] ** 2 + k[:, None] ** 2
        else:
            off = np.fft.fftfreq(n2, d=1 / n2) * g.dx
            self._u2 = off[None, :] ** 2 + off[:, None] ** 2

    def spectrum(self, kern: _Chirp):
        if self.method == "transfer":
            return kern.transfer(self._k2)
        return sfft.fft2(kern.real_space(self._u2, self.g.dx))

    def apply(self, spec, values):
        n = self.g.n
        pad = np.zeros((2 * n, 2 * n), dtype=complex)
        pad[:n, :n] = values
        return sfft.ifft2(spec * sfft.fft2(pad))[:n, :n]

    def impulse(self, spec, iy, ix):
        """Response on the grid to a unit sample at ``(iy, ix)``."""
        n = self.g.n
        resp = sfft.ifft2(spec)
        return np.roll(resp, (iy, ix), axis=(0, 1))[:n, :n]


def _split(f: VectorField, plate: QPlateSpec):
    g = f.grid
    alpha = axis_angle(plate, g.phi)
    gx, gy = apply(local_flip_matrix(alpha), f.vx, f.vy)
    core = _defect_mask(plate, g)
    keep = ~core
    fe = (0.5 * (f.vx + gx) * keep, 0.5 * (f.vy + gy) * keep)
    fo = (0.5 * (f.vx - gx) * keep, 0.5 * (f.vy - gy) * keep)
    return alpha, fe, fo, core


def qplate_propagate(f: VectorField, plate: QPlateSpec, m: UniaxialMedium,
                     mode=KernelMode.APPROX, *, method: str = "auto",
                     normalization: str = "unit", exact_max_n: int = EXACT_MAX_N) -> VectorField:
    """Field at the output face of the plate.

    Parameters
    ----------
    mode : KernelMode
        ``THIN`` applies the local Jones matrix only.  ``APPROX`` uses the
        isotropic extraordinary kernel and fast convolutions.  ``EXACT``
        evaluates the astigmatic extraordinary kernel by direct quadrature and
        is refused for ``n > exact_max_n``.
    method : {"auto", "direct", "transfer"}
        Convolution form; ``"auto"`` samples the kernel in real space only when
        the chirp is resolved on the grid.
    normalization : {"unit", "common"}
        DC gain of the approximated extraordinary kernel, see module notes.
    """
    mode = KernelMode.parse(mode)
    if mode is KernelMode.THIN:
        return thin_element_apply(f, plate, m)

    g = f.grid
    if mode is KernelMode.EXACT and g.n > exact_max_n:
        raise ValueError(
            f"ExactFresnel is O(n^4) and limited to n <= {exact_max_n}; got n={g.n}. "
            "Use ApproxFresnel or raise exact_max_n explicitly."
        )
    if mode is KernelMode.APPROX and astigmatism_ratio(m) > ASTIGMATISM_WARN:
        warnings.warn(
            f"|dbeta_e|/beta_e = {astigmatism_ratio(m):.3g} exceeds {ASTIGMATISM_WARN}; "
            "the isotropic extraordinary kernel may be inaccurate",
            stacklevel=2,
        )

    how = resolve_method(m, g, method)
    conv = _Convolver(g, how)
    ordinary, extraordinary, core_k = _kernels(m, normalization)
    alpha, fe, fo, core = _split(f, plate)

    spec_o = conv.spectrum(ordinary)
    out = [conv.apply(spec_o, c) for c in fo]

    if mode is KernelMode.APPROX:
        spec_e = conv.spectrum(extraordinary)
        ext = [conv.apply(spec_e, c) for c in fe]
    else:
        if how != "direct":
            warnings.warn(
                "extraordinary chirp is not resolved on this grid; direct quadrature is aliased",
                stacklevel=2,
            )
        ex, ey = _direct.direct_sum(fe[0], fe[1], g.x, m.beta_e, m.dbeta_e,
                                    np.cos(2 * alpha), np.sin(2 * alpha))
        pref = m.beta_o / (np.pi * 1j) * g.dx**2 * np.exp(1j * K0 * m.n_e * m.d)
        ext = [pref * ex, pref * ey]
    out = [a + b for a, b in zip(out, ext)]

    if core.any():
        c = g.center
        resp = conv.impulse(conv.spectrum(core_k), c, c)
        out = [o + v[c, c] * resp for o, v in zip(out, f.components)]

    return VectorField(g, out[0], out[1])
