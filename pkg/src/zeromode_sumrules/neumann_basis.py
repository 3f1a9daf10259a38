"""Homogeneous Neumann string on [-1/2, 1/2]: spectrum, modes, matrix elements.

Mode convention: ``psi_0 = 1`` and ``psi_n(x) = sqrt(2) cos(n pi (x + 1/2))``,
so that ``-psi_n'' = n^2 pi^2 psi_n`` with ``psi_n'(+-1/2) = 0``. The volume
of the interval is 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P

from ._numerics import ordered_sum
from .quadrature import LEFT, RIGHT, green0_kernel

LENGTH = 1.0
VOLUME = LENGTH
DEFAULT_TRUNCATION = 2000
_DOMAIN_SLACK = 1e-12


def eigenvalue(n):
    """Neumann eigenvalue ``n**2 pi**2`` (array-friendly)."""
    n = np.asarray(n)
    if np.any(n < 0):
        raise ValueError("mode index must be non-negative")
    out = (n * math.pi) ** 2
    return float(out) if out.ndim == 0 else out


def mode(n: int, x):
    """Mode function ``psi_n`` evaluated at ``x``."""
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.ones_like(x)
    return math.sqrt(2.0) * np.cos(n * math.pi * (x + 0.5))


def modes(count: int, x) -> np.ndarray:
    """Array of shape ``(count, *x.shape)`` holding ``psi_0 .. psi_{count-1}``."""
    x = np.asarray(x, dtype=float)
    n = np.arange(count).reshape((count,) + (1,) * x.ndim)
    out = math.sqrt(2.0) * np.cos(n * math.pi * (x + 0.5))
    out[0] = 1.0
    return out


# -- exact moments ---------------------------------------------------------

def _cos_moments(p: int, k: np.ndarray) -> np.ndarray:
    """``int_{-1/2}^{1/2} x**p cos(k pi (x + 1/2)) dx`` for integer ``k >= 0``.

    Uses cos(k pi (x+1/2)) = cos(k pi x) cos(k pi/2) - sin(k pi x) sin(k pi/2)
    and the integration-by-parts recursions for the centred moments
    C_p = int x^p cos(a x), S_p = int x^p sin(a x) over [-h, h].
    """
    k = np.asarray(k, dtype=np.int64)
    h = 0.5
    out = np.empty(k.shape, dtype=float)
    zero = k == 0
    out[zero] = (h ** (p + 1) * (1 - (-1) ** (p + 1))) / (p + 1)
    kk = k[~zero]
    if kk.size:
        a = kk * math.pi
        quarter = kk % 4
        sin_h = np.choose(quarter, [0.0, 1.0, 0.0, -1.0])  # sin(k pi / 2)
        cos_h = np.choose(quarter, [1.0, 0.0, -1.0, 0.0])  # cos(k pi / 2)
        c = 2.0 * sin_h / a
        s = np.zeros_like(a)
        for q in range(1, p + 1):
            c_next = h**q * sin_h * (1 + (-1) ** q) / a - (q / a) * s
            s_next = -(h**q) * cos_h * (1 - (-1) ** q) / a + (q / a) * c
            c, s = c_next, s_next
        out[~zero] = c * cos_h - s * sin_h
    return out


@lru_cache(maxsize=64)
def moment_table(p: int, size: int) -> np.ndarray:
    """Exact ``<n| x**p |m>`` for ``0 <= n, m < size`` (read-only)."""
    f = _cos_moments(p, np.arange(2 * size - 1))
    n = np.arange(size)
    norm = np.where(n == 0, 1.0, math.sqrt(2.0))
    table = 0.5 * np.outer(norm, norm) * (f[np.abs(n[:, None] - n[None, :])] + f[n[:, None] + n[None, :]])
    table = 0.5 * (table + table.T)
    table.flags.writeable = False
    return table


def polynomial_table(coeffs, size: int) -> np.ndarray:
    """``<n| sum_p c_p x**p |m>`` for a polynomial given by ascending coefficients."""
    table = np.zeros((size, size))
    for p, c in enumerate(np.asarray(coeffs, dtype=float)):
        if c != 0.0:
            table += c * moment_table(p, size)
    return table


# -- density ---------------------------------------------------------------

@dataclass(frozen=True)
class DensityModel:
    """Density ``Sigma(x) = 1 + lam * sigma(x)`` with polynomial ``sigma``.

    Parameters
    ----------
    sigma_coeffs : tuple of float
        Ascending polynomial coefficients of ``sigma`` in ``x``.
    lam : float
        Power-counting parameter; physical results use ``lam = 1``.
    """

    sigma_coeffs: tuple = (0.0,)
    lam: float = 1.0
    _min_density: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        coeffs = tuple(float(c) for c in np.atleast_1d(self.sigma_coeffs))
        object.__setattr__(self, "sigma_coeffs", coeffs or (0.0,))
        lowest = self._polynomial_minimum()
        object.__setattr__(self, "_min_density", lowest)
        if not lowest > 0.0:
            raise ValueError(
                f"density 1 + lam*sigma(x) must be positive on [-1/2, 1/2]; minimum is {lowest:.6g}"
            )

    @classmethod
    def homogeneous(cls) -> "DensityModel":
        return cls((0.0,))

    @classmethod
    def linear(cls, kappa: float, lam: float = 1.0) -> "DensityModel":
        """``sigma(x) = kappa * x``; valid for ``|lam * kappa| < 2``."""
        return cls((0.0, float(kappa)), lam)

    def _polynomial_minimum(self) -> float:
        total = P.polyadd([1.0], self.lam * np.asarray(self.sigma_coeffs))
        candidates = [LEFT, RIGHT]
        deriv = P.polyder(total)
        if deriv.size and np.any(deriv != 0.0):
            for r in P.polyroots(deriv) if deriv.size > 1 else []:
                if abs(r.imag) < 1e-12 and LEFT <= r.real <= RIGHT:
                    candidates.append(r.real)
        return float(min(P.polyval(candidates, total)))

    @property
    def is_homogeneous(self) -> bool:
        return self.lam == 0.0 or all(c == 0.0 for c in self.sigma_coeffs)

    @property
    def kappa(self) -> float | None:
        """Effective slope ``lam * kappa`` when ``sigma`` is linear in x, else None."""
        c = np.trim_zeros(np.asarray(self.sigma_coeffs), "b")
        if c.size == 0:
            return 0.0
        if c.size == 2 and c[0] == 0.0:
            return float(self.lam * c[1])
        return None

    @property
    def effective_coeffs(self) -> np.ndarray:
        """Coefficients of ``lam * sigma``."""
        return self.lam * np.asarray(self.sigma_coeffs)

    def sigma(self, x):
        return P.polyval(np.asarray(x, dtype=float), np.asarray(self.sigma_coeffs))

    def density(self, x):
        return 1.0 + self.lam * self.sigma(x)

    def mean_perturbation(self) -> float:
        """``int lam*sigma dx``, the large-n limit of ``<n|lam sigma|n>``."""
        return float(polynomial_table(self.effective_coeffs, 1)[0, 0])

    def perturbation_table(self, size: int, power: int = 1) -> np.ndarray:
        """``<n|(lam sigma)**power|m>`` for ``0 <= n, m < size``."""
        if power == 0:
            return np.eye(size)
        return polynomial_table(P.polypow(self.effective_coeffs, power), size)

    def mass_table(self, size: int) -> np.ndarray:
        """``<n|Sigma|m>``."""
        return np.eye(size) + self.perturbation_table(size)


def sigma_element(n: int, m: int, density: DensityModel) -> float:
    """``<n|sigma|m>`` by the exact polynomial moments (``lam`` not applied)."""
    if n < 0 or m < 0:
        raise ValueError("mode indices must be non-negative")
    size = max(n, m) + 1
    return float(polynomial_table(density.sigma_coeffs, size)[n, m])


@dataclass(frozen=True)
class NeumannBasis:
    """Truncated homogeneous Neumann spectrum with the zero mode at index 0."""

    mode_count: int = DEFAULT_TRUNCATION + 1
    length: float = LENGTH

    def __post_init__(self):
        if self.length != LENGTH:
            raise ValueError("only the unit-length string is supported")
        if self.mode_count < 1:
            raise ValueError("mode_count must be positive")

    @property
    def volume(self) -> float:
        return self.length

    @property
    def eigenvalues(self) -> np.ndarray:
        return eigenvalue(np.arange(self.mode_count)).astype(float)

    def modes(self, x) -> np.ndarray:
        return modes(self.mode_count, x)

    def gram(self, order: int | None = None) -> np.ndarray:
        """Gram matrix of the modes under Gauss-Legendre quadrature."""
        from .quadrature import gauss_legendre

        order = order or 2 * self.mode_count + 2
        x, w = gauss_legendre(order)
        psi = self.modes(x)
        return (psi * w) @ psi.T


# -- Green's functions -----------------------------------------------------

def _check_domain(*coords):
    for c in coords:
        c = np.asarray(c, dtype=float)
        if np.any(c < LEFT - _DOMAIN_SLACK) or np.any(c > RIGHT + _DOMAIN_SLACK):
            raise ValueError("coordinates must lie in [-1/2, 1/2]")


def green_regularized(x, y):
    """Closed-form ``G0(x, y) = (1 - 6|x - y| + 6(x^2 + y^2)) / 12``."""
    _check_domain(x, y)
    out = green0_kernel(x, y)
    return float(out) if np.ndim(out) == 0 else out


def green_q(q: int, x, y, truncation: int = DEFAULT_TRUNCATION):
    """Truncated spectral sum ``sum_{n=1}^{truncation} psi_n(x) psi_n(y) / eps_n**(q+1)``."""
    if q < 0:
        raise ValueError("q must be non-negative")
    if truncation < 1:
        raise ValueError("truncation must be at least 1")
    _check_domain(x, y)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    n = np.arange(1, truncation + 1).reshape((-1,) + (1,) * x.ndim)
    weights = 1.0 / ((n * math.pi) ** 2) ** (q + 1)
    terms = 2.0 * np.cos(n * math.pi * (x + 0.5)) * np.cos(n * math.pi * (y + 0.5)) * weights
    if x.ndim == 0:
        return ordered_sum(terms[::-1])
    return terms[::-1].sum(axis=0)
