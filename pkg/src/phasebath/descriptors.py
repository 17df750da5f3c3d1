"""Symbolic phase-space weight-function descriptors and exact operations on them.

A descriptor is one of:

* ``DeltaP`` -- point mass (coherent state).
* ``GaussianPolyP`` -- polynomial-times-Gaussian, polynomial in coordinates
  centred on the Gaussian.
* ``GaussianUSeriesP`` -- Gaussian times a separable truncated Tricomi-U
  series (the evolved squeezed-coherent form).
* ``HermiteDeltaSeriesP`` -- separable series of even delta derivatives
  (the initial squeezed-coherent form).
* ``LaplacianDeltaP`` -- exponentially weighted mixed second derivative of a
  delta (the initial photon-added-coherent form).
* ``SampledGridP`` -- values tabulated on a uniform rectangular grid.

The first three are ordinary functions and can be evaluated pointwise; the
delta-derivative kinds are distributions and only enter integrals analytically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import ClassVar

import numpy as np
from numpy.polynomial import polynomial as npoly

from .core import check_amplitude, u_series

__all__ = [
    "DeltaP",
    "GaussianPolyP",
    "GaussianUSeriesP",
    "HermiteDeltaSeriesP",
    "LaplacianDeltaP",
    "SampledGridP",
    "evaluate_p",
    "integral_p",
    "is_regular",
    "rescale_zero_temperature",
    "fock_populations",
]

_NORMALIZATION_TOL = 1e-8


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DeltaP:
    """Point mass at ``center``."""

    center: complex
    kind: ClassVar[str] = "delta"

    def __post_init__(self):
        object.__setattr__(self, "center", check_amplitude(self.center))


@dataclass(frozen=True, eq=False)
class GaussianPolyP:
    """P(alpha) = poly(u, v) exp(-(u^2+v^2)/width), u + iv = alpha - center.

    ``coeffs[i, j]`` multiplies u^i v^j.  Must integrate to 1.
    """

    center: complex
    width: float
    coeffs: np.ndarray
    kind: ClassVar[str] = "gaussian-polynomial"

    def __post_init__(self):
        object.__setattr__(self, "center", check_amplitude(self.center))
        object.__setattr__(self, "coeffs", _frozen_array(self.coeffs))
        if not (math.isfinite(self.width) and self.width > 0):
            raise ValueError(f"width must be positive, got {self.width}")
        if self.coeffs.ndim != 2:
            raise ValueError("coeffs must be a 2-D array")
        mass = integral_p(self)
        if abs(mass - 1.0) > _NORMALIZATION_TOL:
            raise ValueError(f"descriptor integrates to {mass!r}, expected 1")


@dataclass(frozen=True)
class GaussianUSeriesP:
    """Gaussian times separable truncated U-series.

    P(alpha) = (1/(pi width)) S(gain_r, u^2/width) S(gain_i, v^2/width)
               exp(-(u^2+v^2)/width)
    with S(g, x) = sum_{k<=order} g^k/k! U(-k, 1/2, x).  Every k >= 1 term
    integrates to zero, so the total mass is exactly 1 at any truncation.
    """

    center: complex
    width: float
    gain_r: float
    gain_i: float
    order: int
    kind: ClassVar[str] = "gaussian-polynomial"

    def __post_init__(self):
        object.__setattr__(self, "center", check_amplitude(self.center))
        if not (math.isfinite(self.width) and self.width > 0):
            raise ValueError(f"width must be positive, got {self.width}")
        if self.order < 0:
            raise ValueError("truncation order must be >= 0")

    @property
    def tail_ratio(self) -> float:
        """Convergence handle: geometric ratio of successive series terms."""
        return max(abs(self.gain_r), abs(self.gain_i))


@dataclass(frozen=True)
class HermiteDeltaSeriesP:
    """Separable even-derivative delta series.

    P(alpha) = [sum_n coef_r^n/n! d^{2n}/du^{2n} delta(u)]
               [sum_m coef_i^m/m! d^{2m}/dv^{2m} delta(v)],
    truncated at ``order`` in each factor.
    """

    center: complex
    coef_r: float
    coef_i: float
    order: int
    kind: ClassVar[str] = "delta-derivative-series"

    def __post_init__(self):
        object.__setattr__(self, "center", check_amplitude(self.center))
        if self.order < 0:
            raise ValueError("truncation order must be >= 0")


@dataclass(frozen=True)
class LaplacianDeltaP:
    """Weighted mixed delta derivative (photon-added coherent state).

    Canonical form (arg_scale = weight = 1):
    P(alpha) = e^{|alpha|^2 - |center|^2}/(|center|^2 + 1)
               d^2/(d alpha d alpha*) delta2(alpha - center).
    A zero-temperature rescale maps it to weight * P(arg_scale * alpha).
    """

    center: complex
    arg_scale: float = 1.0
    weight: float = 1.0
    kind: ClassVar[str] = "delta-derivative-series"

    def __post_init__(self):
        object.__setattr__(self, "center", check_amplitude(self.center))
        if not (math.isfinite(self.arg_scale) and self.arg_scale > 0):
            raise ValueError("arg_scale must be positive")


@dataclass(frozen=True, eq=False)
class SampledGridP:
    """Weight function tabulated on a uniform rectangular grid."""

    x_axis: np.ndarray
    y_axis: np.ndarray
    values: np.ndarray
    kind: ClassVar[str] = "sampled-grid"

    def __post_init__(self):
        for name in ("x_axis", "y_axis", "values"):
            object.__setattr__(self, name, _frozen_array(getattr(self, name)))
        for axis in (self.x_axis, self.y_axis):
            steps = np.diff(axis)
            if axis.ndim != 1 or axis.size < 2 or np.any(steps <= 0):
                raise ValueError("axes must be strictly increasing 1-D arrays")
            if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
                raise ValueError("axes must be uniformly spaced")
        if self.values.shape != (self.x_axis.size, self.y_axis.size):
            raise ValueError("values shape must be (len(x_axis), len(y_axis))")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid values must be finite")


def is_regular(desc) -> bool:
    """True if the descriptor is an ordinary function of alpha."""
    return isinstance(desc, (GaussianPolyP, GaussianUSeriesP, SampledGridP))


def evaluate_p(desc, x, y) -> np.ndarray:
    """Evaluate a regular descriptor at alpha = x + iy (arrays broadcast)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if isinstance(desc, GaussianPolyP):
        u, v = np.broadcast_arrays(x - desc.center.real, y - desc.center.imag)
        return npoly.polyval2d(u, v, desc.coeffs) * np.exp(-(u * u + v * v) / desc.width)
    if isinstance(desc, GaussianUSeriesP):
        u = x - desc.center.real
        v = y - desc.center.imag
        sr = u_series(desc.gain_r, u * u / desc.width, desc.order)
        si = u_series(desc.gain_i, v * v / desc.width, desc.order)
        gauss = np.exp(-(u * u + v * v) / desc.width)
        return sr * si * gauss / (math.pi * desc.width)
    if isinstance(desc, SampledGridP):
        from scipy.interpolate import RegularGridInterpolator

        interp = RegularGridInterpolator(
            (desc.x_axis, desc.y_axis), desc.values, bounds_error=False, fill_value=0.0
        )
        pts = np.stack(np.broadcast_arrays(x, y), axis=-1)
        return interp(pts)
    raise TypeError(f"descriptor of kind {desc.kind!r} is singular; cannot evaluate pointwise")


def _gaussian_1d_moments(width: float, kmax: int) -> np.ndarray:
    """integral u^k exp(-u^2/width) du for k = 0..kmax (zero for odd k)."""
    out = np.zeros(kmax + 1)
    for k in range(0, kmax + 1, 2):
        out[k] = width ** ((k + 1) / 2) * math.gamma((k + 1) / 2)
    return out


def integral_p(desc) -> float:
    """Total mass of the descriptor over the whole phase plane."""
    if isinstance(desc, GaussianPolyP):
        ni, nj = desc.coeffs.shape
        gi = _gaussian_1d_moments(desc.width, ni - 1)
        gj = _gaussian_1d_moments(desc.width, nj - 1)
        return float(gi @ desc.coeffs @ gj)
    if isinstance(desc, (DeltaP, GaussianUSeriesP, HermiteDeltaSeriesP)):
        # Delta derivatives and k >= 1 series terms integrate to zero.
        return 1.0
    if isinstance(desc, LaplacianDeltaP):
        # Normalized state; argument rescaling preserves the mass by construction.
        return 1.0
    if isinstance(desc, SampledGridP):
        return float(np.trapezoid(np.trapezoid(desc.values, desc.y_axis, axis=1), desc.x_axis))
    raise TypeError(f"unsupported descriptor {type(desc).__name__}")


def rescale_zero_temperature(desc, decay_factor: float):
    """Pure-decay map P(alpha) -> P(alpha / eta) / eta^2 with eta = decay_factor.

    This is argument rescaling plus reweighting; it preserves total mass and
    maps every descriptor kind onto its own kind.
    """
    eta = float(decay_factor)
    if not (0 < eta <= 1):
        raise ValueError(f"decay_factor must lie in (0, 1], got {decay_factor}")
    if eta == 1.0:
        return desc
    if isinstance(desc, DeltaP):
        return DeltaP(desc.center * eta)
    if isinstance(desc, GaussianPolyP):
        ni, nj = desc.coeffs.shape
        scale = np.array(
            [[eta ** (-(i + j + 2)) for j in range(nj)] for i in range(ni)]
        )
        return GaussianPolyP(desc.center * eta, desc.width * eta * eta, desc.coeffs * scale)
    if isinstance(desc, GaussianUSeriesP):
        return replace(desc, center=desc.center * eta, width=desc.width * eta * eta)
    if isinstance(desc, HermiteDeltaSeriesP):
        return replace(
            desc,
            center=desc.center * eta,
            coef_r=desc.coef_r * eta * eta,
            coef_i=desc.coef_i * eta * eta,
        )
    if isinstance(desc, LaplacianDeltaP):
        return replace(desc, arg_scale=desc.arg_scale / eta, weight=desc.weight / (eta * eta))
    if isinstance(desc, SampledGridP):
        return SampledGridP(desc.x_axis * eta, desc.y_axis * eta, desc.values / (eta * eta))
    raise TypeError(f"unsupported descriptor {type(desc).__name__}")


def fock_populations(desc, cutoff: int, nodes: int = 240) -> np.ndarray:
    """Number-state populations <k|rho|k> of the state described by ``desc``.

    p_k = integral P(alpha) e^{-|alpha|^2} |alpha|^{2k} / k! d2alpha,
    by tensor Gauss-Legendre quadrature for regular kinds and in closed form
    for a point mass (Poissonian weights).
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    ks = np.arange(cutoff)
    if isinstance(desc, DeltaP):
        nsq = abs(desc.center) ** 2
        if nsq == 0.0:
            out = np.zeros(cutoff)
            out[0] = 1.0
            return out
        logp = ks * math.log(nsq) - nsq - [math.lgamma(k + 1) for k in ks]
        return np.exp(logp)
    if not is_regular(desc):
        raise TypeError(f"cannot take populations of singular kind {desc.kind!r}")
    if isinstance(desc, SampledGridP):
        cx, cy, half = (
            0.5 * (desc.x_axis[0] + desc.x_axis[-1]),
            0.5 * (desc.y_axis[0] + desc.y_axis[-1]),
            0.5 * max(desc.x_axis[-1] - desc.x_axis[0], desc.y_axis[-1] - desc.y_axis[0]),
        )
        center, reach = complex(cx, cy), half
    else:
        center = desc.center
        reach = 8.0 * math.sqrt(desc.width) + math.sqrt(cutoff) + 4.0
    xs, wx = np.polynomial.legendre.leggauss(nodes)
    xg = center.real + reach * xs
    yg = center.imag + reach * xs
    w2 = np.outer(wx, wx) * reach * reach
    X, Y = np.meshgrid(xg, yg, indexing="ij")
    pvals = evaluate_p(desc, X, Y)
    r2 = X * X + Y * Y
    logs = np.log(np.maximum(r2, 1e-300))
    out = np.empty(cutoff)
    lgam = np.array([math.lgamma(k + 1) for k in ks])
    for k in ks:
        weight = np.exp(k * logs - r2 - lgam[k])
        out[k] = float(np.sum(w2 * pvals * weight))
    return out
