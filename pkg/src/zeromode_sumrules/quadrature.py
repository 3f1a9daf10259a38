"""Gauss-Legendre rules on the unit interval [-1/2, 1/2] and kernel application.

These routines form the quadrature side of the dual checks: everything here
works directly with functions of x and never touches mode expansions.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np

LEFT, RIGHT = -0.5, 0.5

Func = Callable[[np.ndarray], np.ndarray]


@lru_cache(maxsize=None)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = np.polynomial.legendre.leggauss(order)
    t.flags.writeable = False
    w.flags.writeable = False
    return t, w


def gauss_legendre(order: int, a: float = LEFT, b: float = RIGHT) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``order``-point rule on ``[a, b]``."""
    t, w = _legendre(order)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * t, half * w


def integrate(f: Func, order: int = 40, a: float = LEFT, b: float = RIGHT) -> float:
    x, w = gauss_legendre(order, a, b)
    return float(np.dot(w, f(x)))


def adaptive_integrate(f: Func, a: float = LEFT, b: float = RIGHT, tol: float = 1e-14, order: int = 20,
                       max_depth: int = 30) -> float:
    """Adaptive Gauss-Legendre: bisect until an ``order`` and ``2*order`` rule agree."""

    def panel(lo, hi, depth):
        coarse = integrate(f, order, lo, hi)
        fine = integrate(f, 2 * order, lo, hi)
        if abs(fine - coarse) <= tol * max(1.0, abs(fine)) or depth >= max_depth:
            return fine
        mid = 0.5 * (lo + hi)
        return panel(lo, mid, depth + 1) + panel(mid, hi, depth + 1)

    return panel(a, b, 0)


def green0_kernel(x, y):
    """Regularized Neumann Green's function without domain checks (vectorized)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return (1.0 - 6.0 * np.abs(x - y) + 6.0 * (x * x + y * y)) / 12.0


def apply_green0(f: Func, order: int = 24) -> Func:
    """Return ``x -> int G0(x, y) f(y) dy``.

    The y-integral is split at the kink ``y = x`` so each panel sees a smooth
    integrand; for polynomial ``f`` the result is exact once ``order`` covers
    the degree. Inputs of any shape are accepted.
    """
    t, w = _legendre(order)

    def g(x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, 1)
        total = np.zeros(flat.shape[0])
        for lo, hi in ((np.full_like(flat, LEFT), flat), (flat, np.full_like(flat, RIGHT))):
            half = 0.5 * (hi - lo)
            y = 0.5 * (lo + hi) + half * t
            total += np.sum(half * w * green0_kernel(flat, y) * f(y), axis=1)
        return total.reshape(x.shape)

    return g
