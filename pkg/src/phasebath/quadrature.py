"""Adaptive tensor-product Gauss-Legendre quadrature helpers."""

from __future__ import annotations

import numpy as np

__all__ = ["QuadratureError", "adaptive_gauss_legendre_1d", "gauss_legendre_nodes"]


class QuadratureError(RuntimeError):
    """Raised when refinement stalls above the requested tolerance."""

    def __init__(self, message: str, error_estimate: float):
        super().__init__(f"{message} (error estimate {error_estimate:.3e})")
        self.error_estimate = error_estimate


def gauss_legendre_nodes(lo: float, hi: float, n: int):
    """Gauss-Legendre nodes and weights scaled to [lo, hi]."""
    xs, ws = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return lo + half * (xs + 1.0), ws * half


def adaptive_gauss_legendre_1d(
    evaluate,
    box_x,
    box_y,
    tol: float = 1e-9,
    start: int = 96,
    max_nodes: int = 1536,
):
    """Refine a separable tensor rule until the result stabilizes.

    ``evaluate(nodes_x, w_x, nodes_y, w_y)`` must return the full output array
    for one tensor rule; node counts double until the sup-norm change drops
    below ``tol``.  Returns (values, error_estimate).
    """
    n = start
    prev = evaluate(*gauss_legendre_nodes(*box_x, n), *gauss_legendre_nodes(*box_y, n))
    err = np.inf
    while n < max_nodes:
        n *= 2
        cur = evaluate(*gauss_legendre_nodes(*box_x, n), *gauss_legendre_nodes(*box_y, n))
        err = float(np.max(np.abs(cur - prev)))
        prev = cur
        if err < tol:
            return cur, err
    raise QuadratureError("quadrature did not converge to tolerance", err)
