"""Perturbative coefficients of the Green's function of order 1/N.

With ``a_n = eps_n + gamma`` the matrix ``Q`` of the shifted Green's function
and its N-th root ``q`` (``q^N = Q`` as matrices in the Neumann basis) are
expanded in powers of the inhomogeneity up to second order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.special import binom

from .neumann_basis import DensityModel, eigenvalue

DEGENERACY_RTOL = 1e-8


def _shifted(eps, gamma):
    a = np.asarray(eps, dtype=float) + gamma
    if np.any(a <= 0.0):
        raise ValueError("shifted eigenvalues eps + gamma must be positive")
    return a


def kernel_eta(N: int, gamma: float, en, em):
    """``sum_{j=0}^{N-1} a_n^{-(N-1-j)/N} a_m^{-j/N}``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    a, b = np.broadcast_arrays(_shifted(en, gamma), _shifted(em, gamma))
    total = sum(a ** (-(N - 1 - j) / N) * b ** (-j / N) for j in range(N))
    return total if np.ndim(total) else float(total)


def kernel_delta(N: int, gamma: float, en, em):
    """``(1/a_n + 1/a_m) / eta_nm``; equal-argument limit ``(2/N) a**(-1/N)`` for close pairs."""
    a, b = np.broadcast_arrays(_shifted(en, gamma), _shifted(em, gamma))
    eta = np.asarray(kernel_eta(N, gamma, en, em))
    out = (1.0 / a + 1.0 / b) / eta
    close = np.abs(a - b) < DEGENERACY_RTOL * np.maximum(a, b)
    if np.any(close):
        mid = 0.5 * (a + b)
        out = np.where(close, (2.0 / N) * mid ** (-1.0 / N), out)
    return out if np.ndim(out) else float(out)


def kernel_xi(N: int, gamma: float, en, er, em):
    """``sum_{j=0}^{N-2} sum_{l=0}^{N-2-j} a_n^{-j/N} a_m^{-(N-2-j-l)/N} a_r^{-l/N}``."""
    a, c, b = np.broadcast_arrays(_shifted(en, gamma), _shifted(er, gamma), _shifted(em, gamma))
    total = np.zeros(a.shape)
    for j, l in _xi_exponents(N):
        total = total + a ** (-j / N) * b ** (-(N - 2 - j - l) / N) * c ** (-l / N)
    return total if np.ndim(total) else float(total)


def _xi_exponents(N):
    return [(j, l) for j in range(N - 1) for l in range(N - 1 - j)]


@dataclass(frozen=True)
class FractionalGreenCoeffs:
    """Order-``order`` coefficient table of the Green's function of order 1/N."""

    N: int
    order: int
    gamma: float
    table: np.ndarray


@dataclass(frozen=True)
class QCoeffs:
    """Order-``order`` table of Q split into the r = 0 term and the primed r-sum."""

    order: int
    gamma: float
    zero_mode: np.ndarray
    primed: np.ndarray

    @property
    def table(self) -> np.ndarray:
        return self.zero_mode + self.primed


def _sigma_powers(density: DensityModel, rows: int, cols: int, top: int, square: str) -> list:
    """``<n|sigma^p|r>`` for ``p = 0..top`` on a ``rows x cols`` block.

    ``square="exact"`` uses the closed-form moments of ``sigma**2``;
    ``square="galerkin"`` uses the matrix square of the ``cols x cols``
    sigma table, i.e. the expansion of ``sqrt(I + sigma)`` for the projected
    density matrix.
    """
    if square not in ("exact", "galerkin"):
        raise ValueError(f"unknown square mode {square!r}")
    s1 = density.perturbation_table(cols, 1)
    out = [np.eye(cols)[:rows], s1[:rows]]
    if top >= 2:
        s2 = density.perturbation_table(cols, 2) if square == "exact" else s1 @ s1
        out.append(s2[:rows])
    return out[: top + 1]


def q_matrices(N: int, gamma: float, density: DensityModel, K: int,
               square: str = "exact") -> tuple[FractionalGreenCoeffs, ...]:
    """Tables ``q^(0), q^(1), q^(2)`` of the order-1/N Green's function on modes ``0..K-1``.

    The intermediate r-sum in ``q^(2)`` runs over every retained mode, the zero
    mode included (``a_0 = gamma``). ``square`` selects how ``<n|sigma^2|m>``
    is formed (see :func:`_sigma_powers`).
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive: the zero mode makes gamma = 0 singular")
    if K < 2:
        raise ValueError("K must be at least 2")
    eps = eigenvalue(np.arange(K)).astype(float)
    a = eps + gamma
    en, em = eps[:, None], eps[None, :]
    delta = kernel_delta(N, gamma, en, em)
    eta = kernel_eta(N, gamma, en, em)
    _, s1, s2 = _sigma_powers(density, K, K, 2, square)

    q0 = np.diag(0.5 * N * np.diag(delta))
    q1 = 0.5 * delta * s1

    w = s1 * delta
    direct = (s1 / a) @ s1
    chained = np.zeros((K, K))
    for j, l in _xi_exponents(N):
        inner = (w * a ** (-l / N)) @ w
        chained += (a ** (-j / N))[:, None] * inner * (a ** (-(N - 2 - j - l) / N))[None, :]
    q2 = -0.125 * delta * s2 + (direct - chained) / (4.0 * eta)

    tables = []
    for order, t in enumerate((q0, q1, q2)):
        t = 0.5 * (t + t.T)
        t.flags.writeable = False
        tables.append(FractionalGreenCoeffs(N, order, gamma, t))
    return tuple(tables)


def q_coeffs(k: int, gamma: float, density: DensityModel, K: int, r_size: int | None = None,
             square: str = "exact") -> QCoeffs:
    """Order-``k`` coefficient of ``Q = sqrt(Sigma) G_gamma sqrt(Sigma)`` on modes ``0..K-1``.

    ``Q^(k)_nm = sum_j C(1/2, j) C(1/2, k-j) sum_r <n|sigma^j|r><r|sigma^(k-j)|m> / (eps_r + gamma)``,
    with the r = 0 term returned separately from the primed sum. ``r_size``
    sets how many modes the r-sum spans (default ``K``).
    """
    if k not in (0, 1, 2):
        raise ValueError("only orders k = 0, 1, 2 are available")
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    R = K if r_size is None else r_size
    if R < K:
        raise ValueError("r_size must be at least K")
    inv_a = 1.0 / (eigenvalue(np.arange(R)).astype(float) + gamma)
    powers = _sigma_powers(density, K, R, k, square)
    zero = np.zeros((K, K))
    primed = np.zeros((K, K))
    for j in range(k + 1):
        c = binom(0.5, j) * binom(0.5, k - j)
        left, right = powers[j], powers[k - j]
        zero += c * inv_a[0] * np.outer(left[:, 0], right[:, 0])
        primed += c * (left[:, 1:] * inv_a[1:]) @ right[:, 1:].T
    return QCoeffs(k, gamma, 0.5 * (zero + zero.T), 0.5 * (primed + primed.T))


def _order_splits(k: int, parts: int, top: int = 2):
    """Ordered ways of writing ``k`` as ``parts`` non-negative summands each ``<= top``."""
    for split in itertools.product(range(min(k, top) + 1), repeat=parts):
        if sum(split) == k:
            yield split


def compose_order(tables, N: int, k: int) -> np.ndarray:
    """Order-``k`` part of the N-fold matrix product ``q q ... q``."""
    total = np.zeros_like(tables[0])
    for split in _order_splits(k, N):
        total += reduce(np.matmul, [tables[j] for j in split])
    return total


def verify_composition(N: int, k: int, gamma: float, density: DensityModel, K: int,
                       reference_size: int | None = None, square: str = "exact") -> float:
    """Max-norm residual of the order-``k`` composition ``q^N - Q^(k)`` on modes ``0..K-1``.

    The q-tables and the intermediate sums of the product use ``K`` modes;
    the r-sum inside ``Q^(k)`` spans ``reference_size`` modes (default ``K``,
    which makes the check an algebraic identity). A larger reference exposes
    the truncation error of the intermediate sums.
    """
    if k not in (0, 1, 2):
        raise ValueError("only orders k = 0, 1, 2 are available")
    tables = [c.table for c in q_matrices(N, gamma, density, K, square)]
    lhs = compose_order(tables, N, k)
    rhs = q_coeffs(k, gamma, density, K, reference_size, square).table
    return float(np.max(np.abs(lhs - rhs)))
