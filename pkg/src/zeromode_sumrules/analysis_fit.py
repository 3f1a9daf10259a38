"""Sweeps of the numerical sum rule over kappa, polynomial fits, analytic Z(3/2) constants."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from ._numerics import ordered_sum, riemann_zeta
from .rr_spectrum import DEFAULT_BASIS, DEFAULT_NMAX, z_numerical
from .sum_rules import SumRuleResult

DEFAULT_KAPPA_GRID = tuple(round(0.01 * k, 2) for k in range(1, 21))


class RankDeficientFit(np.linalg.LinAlgError):
    pass


@lru_cache(maxsize=256)
def _z_numerical_cached(s: float, kappa: float, n_max: int, basis_size: int) -> SumRuleResult:
    return z_numerical(s, kappa, n_max, basis_size)


def _sample(args):
    return _z_numerical_cached(*args)


def sweep_results(s: float, kappa_grid=DEFAULT_KAPPA_GRID, n_max: int = DEFAULT_NMAX, basis_size: int = DEFAULT_BASIS,
                  workers: int = 1) -> list[SumRuleResult]:
    """``z_numerical`` at every grid point, in grid order; ``workers > 1`` uses a process pool."""
    grid = [float(k) for k in kappa_grid]
    for k in grid:
        if not -2.0 < k < 2.0:
            raise ValueError(f"kappa={k} outside (-2, 2)")
    tasks = [(float(s), k, int(n_max), int(basis_size)) for k in grid]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sample, tasks))
    return [_sample(t) for t in tasks]


def kappa_sweep(s: float, kappa_grid=DEFAULT_KAPPA_GRID, n_max: int = DEFAULT_NMAX, basis_size: int = DEFAULT_BASIS,
                workers: int = 1) -> list[tuple[float, float]]:
    """Table of ``(kappa, Z_num(s; kappa))``, in grid order."""
    results = sweep_results(s, kappa_grid, n_max, basis_size, workers)
    return [(r.meta["kappa"], r.total) for r in results]


@dataclass(frozen=True)
class FitResult:
    degree: int
    coefficients: tuple  # ascending powers of kappa
    residual_norm: float
    condition_estimate: float
    sample_points: tuple

    def __call__(self, kappa):
        return np.polynomial.polynomial.polyval(kappa, self.coefficients)


def polyfit(samples, degree: int = 4) -> FitResult:
    """Least-squares polynomial in kappa through ``samples`` via QR of the Vandermonde matrix.

    Columns are scaled to unit norm before factorization; the condition
    estimate refers to the scaled triangular factor.
    """
    pts = tuple((float(k), float(v)) for k, v in samples)
    if len(pts) <= degree:
        raise ValueError(f"need more than {degree} samples for a degree-{degree} fit")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    V = np.vander(x, degree + 1, increasing=True)
    norms = np.linalg.norm(V, axis=0)
    if np.any(norms == 0.0):
        raise RankDeficientFit("a Vandermonde column vanishes on the sample points")
    Q, R = np.linalg.qr(V / norms)
    diag = np.abs(np.diag(R))
    if diag.min() <= 1e-13 * diag.max():
        raise RankDeficientFit("Vandermonde system is numerically rank deficient")
    coeffs = scipy.linalg.solve_triangular(R, Q.T @ y) / norms
    residual = float(np.linalg.norm(V @ coeffs - y))
    return FitResult(degree, tuple(float(c) for c in coeffs), residual, float(np.linalg.cond(R)), pts)


@dataclass(frozen=True)
class Z32Constants:
    """Analytic second-order ``Z(3/2) = c0 + c2 kappa^2`` for ``Sigma = 1 + kappa x``."""

    c0: float
    c2: float
    double_sum: float
    double_sum_tail: float


def _double_sum_terms(K: int) -> np.ndarray:
    n = np.arange(1, K + 1, dtype=float)[:, None]
    m = np.arange(1, K + 1, dtype=float)[None, :]
    odd = 2.0 * n - 1.0
    return 12.0 * (4.0 * m**2 + odd**2) ** 2 / (
        math.pi**7 * m * odd * (2.0 * m - 2.0 * n + 1.0) ** 4 * (2.0 * m + 2.0 * n - 1.0) ** 5
    )


def z32_constants(K_double_sum: int = 2000) -> Z32Constants:
    """``c0 = zeta(3)/pi^3`` and ``c2 = -381 zeta(7)/(32 pi^7) + D``.

    ``D`` is the pair sum over ``n, m >= 1`` (m inner, n outer), truncated
    at ``K_double_sum``. The tail is estimated from the outermost shell
    ``K/2 < max(n, m) <= K`` assuming the ``K^-2`` decay of the remainder,
    for which the remainder is a third of that shell.
    """
    if K_double_sum < 100:
        raise ValueError("K_double_sum must be at least 100")
    terms = _double_sum_terms(K_double_sum)
    full = ordered_sum(terms)
    half = K_double_sum // 2
    shell = full - ordered_sum(terms[:half, :half])
    tail = shell / 3.0
    D = full + tail
    c0 = riemann_zeta(3.0) / math.pi**3
    c2 = -381.0 * riemann_zeta(7.0) / (32.0 * math.pi**7) + D
    return Z32Constants(c0, c2, D, abs(tail))
