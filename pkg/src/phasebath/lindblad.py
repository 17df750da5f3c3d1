"""Independent ground truth: direct integration of the damping master equation
in a truncated number basis.

The generator is

    L rho = gamma (1 + nbar) (2 a rho a^dag - a^dag a rho - rho a^dag a)
          + gamma nbar       (2 a^dag rho a - a a^dag rho - rho a a^dag),

applied elementwise (the ladder operators only shift indices, so one
application costs O(cutoff^2)).  Time stepping is classic fixed-step
fourth-order Runge-Kutta with re-Hermitization after every step.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import BathParams, check_amplitude
from .fock import FockDensityMatrix, annihilation, coherent_vector
from .states import MomentSet

__all__ = [
    "LindbladSettings",
    "apply_liouvillian",
    "husimi_q",
    "husimi_q_grid",
    "integrate",
    "moments_from_rho",
]

_TRACE_DRIFT_LIMIT = 1e-6


@dataclass(frozen=True)
class LindbladSettings:
    """Integrator knobs: truncation dimension, RK4 step, bath parameters."""

    cutoff: int
    step: float
    bath: BathParams

    def __post_init__(self):
        if self.cutoff < 2:
            raise ValueError(f"cutoff must be >= 2, got {self.cutoff}")
        if not (math.isfinite(self.step) and self.step > 0):
            raise ValueError(f"step must be positive, got {self.step}")
        # Empirical stiffness bound for the explicit scheme: the fastest decay
        # rate in the truncated generator scales like gamma (1 + 2 nbar) cutoff.
        stiffness = self.step * self.bath.gamma * (1.0 + 2.0 * self.bath.nbar) * self.cutoff
        if stiffness >= 0.5:
            raise ValueError(
                f"step {self.step} too large for cutoff {self.cutoff}: "
                f"stability product {stiffness:.3f} >= 0.5"
            )


def _liouvillian(rho: np.ndarray, gamma: float, nbar: float) -> np.ndarray:
    n = rho.shape[0]
    sq = np.sqrt(np.arange(n))
    levels = np.arange(n)
    out = np.zeros_like(rho)
    # a rho a^dag and a^dag rho a as index shifts
    out[:-1, :-1] += 2.0 * gamma * (1.0 + nbar) * rho[1:, 1:] * np.outer(sq[1:], sq[1:])
    if nbar > 0.0:
        out[1:, 1:] += 2.0 * gamma * nbar * rho[:-1, :-1] * np.outer(sq[1:], sq[1:])
    decay = gamma * (1.0 + nbar) * levels[:, None] + gamma * nbar * (levels[:, None] + 1.0)
    out -= (decay + decay.T) * rho
    return out


def apply_liouvillian(rho: FockDensityMatrix, bath: BathParams) -> np.ndarray:
    """One application of the damping generator to a state."""
    return _liouvillian(np.asarray(rho.elements), bath.gamma, bath.nbar)


def integrate(
    rho0: FockDensityMatrix,
    settings: LindbladSettings,
    t_final: float,
    sample_times,
) -> list[FockDensityMatrix]:
    """RK4 states at the requested sample times.

    Each sampling interval is subdivided so steps land exactly on the sample
    times; the state is re-Hermitized after every step and the trace drift is
    checked against a hard limit.
    """
    sample_times = [float(t) for t in sample_times]
    if sample_times != sorted(sample_times):
        raise ValueError("sample_times must be sorted ascending")
    if sample_times and (sample_times[0] < 0 or sample_times[-1] > t_final):
        raise ValueError("sample_times must lie within [0, t_final]")
    if rho0.cutoff != settings.cutoff:
        raise ValueError("state cutoff does not match the integrator settings")

    gamma, nbar = settings.bath.gamma, settings.bath.nbar
    rho = np.array(rho0.elements, dtype=complex)
    trace0 = float(rho.trace().real)
    samples: list[FockDensityMatrix] = []
    now = 0.0
    for target in sample_times:
        span = target - now
        if span > 0.0:
            nsteps = max(1, math.ceil(span / settings.step))
            h = span / nsteps
            for _ in range(nsteps):
                k1 = _liouvillian(rho, gamma, nbar)
                k2 = _liouvillian(rho + 0.5 * h * k1, gamma, nbar)
                k3 = _liouvillian(rho + 0.5 * h * k2, gamma, nbar)
                k4 = _liouvillian(rho + h * k3, gamma, nbar)
                rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                rho = 0.5 * (rho + rho.conj().T)
            now = target
        drift = abs(float(rho.trace().real) - trace0)
        if drift > _TRACE_DRIFT_LIMIT:
            raise RuntimeError(
                f"trace drifted by {drift:.3e} at t = {now}; the cutoff "
                f"({settings.cutoff}) is too small or the step ({settings.step}) too large"
            )
        samples.append(FockDensityMatrix(settings.cutoff, rho.copy(), 1.0 - float(rho.trace().real)))
    return samples


def husimi_q(rho: FockDensityMatrix, alpha) -> float:
    """(1/pi) <alpha|rho|alpha> from the truncated state."""
    alpha = check_amplitude(alpha)
    _truncation_guard(rho.cutoff, abs(alpha) ** 2)
    vec = coherent_vector(alpha, rho.cutoff)
    return float(np.real(vec.conj() @ rho.elements @ vec) / math.pi)


def husimi_q_grid(rho: FockDensityMatrix, x_axis, y_axis):
    """Vectorized husimi_q over a rectangular grid; returns a PhaseSpaceGrid."""
    from .quasiprob import PhaseSpaceGrid

    x = np.asarray(x_axis, dtype=float)
    y = np.asarray(y_axis, dtype=float)
    _truncation_guard(rho.cutoff, float(np.max(x * x) + np.max(y * y)))
    alphas = (x[:, None] + 1j * y[None, :]).ravel()
    n = np.arange(rho.cutoff)
    logfact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1.0, rho.cutoff)))))
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = n[None, :] * np.log(np.abs(alphas))[:, None]
    logs[:, 0] = 0.0
    vecs = np.exp(-0.5 * np.abs(alphas)[:, None] ** 2 + logs - 0.5 * logfact[None, :]) * np.exp(
        1j * n[None, :] * np.angle(alphas)[:, None]
    )
    q = np.real(np.einsum("km,mn,kn->k", vecs.conj(), rho.elements, vecs)) / math.pi
    return PhaseSpaceGrid(x, y, q.reshape(x.size, y.size), {"quantity": "Q"})


def _truncation_guard(cutoff: int, alpha_sq: float) -> None:
    if alpha_sq >= cutoff / 4.0:
        from scipy.stats import poisson

        tail = float(poisson.sf(cutoff - 1, alpha_sq))
        if tail < 1e-10:
            return
        warnings.warn(
            f"|alpha|^2 = {alpha_sq:.2f} close to cutoff {cutoff}; coherent-state "
            f"weight beyond the basis is about {tail:.2e}",
            RuntimeWarning,
            stacklevel=3,
        )


def moments_from_rho(rho: FockDensityMatrix) -> MomentSet:
    """Trace evaluation of the standard observables against the state."""
    if rho.trace_deficit > 1e-6:
        raise ValueError(f"trace deficit {rho.trace_deficit:.3e} too large for moments")
    el = np.asarray(rho.elements)
    n = el.shape[0]
    levels = np.arange(n, dtype=float)
    diag = el.diagonal().real
    mean_n = float(diag @ levels)
    second = float(diag @ (levels * (levels - 1.0)))
    sq = np.sqrt(levels[1:])
    mean_a = complex(np.sum(sq * el.diagonal(-1)))  # Tr[rho a] = sum sqrt(k) rho[k, k-1]
    sq2 = np.sqrt((levels[:-2] + 1.0) * (levels[:-2] + 2.0))
    a_squared = complex(np.sum(sq2 * el.diagonal(-2))) if n > 2 else 0j
    re2 = a_squared.real
    var_x = (1.0 + 2.0 * mean_n + 2.0 * re2) / 4.0 - mean_a.real**2
    var_y = (1.0 + 2.0 * mean_n - 2.0 * re2) / 4.0 - mean_a.imag**2
    return MomentSet(mean_a, mean_n, second, var_x, var_y)
