"""Small numerical kernels shared by the sum-rule routes."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

# B_2, B_4, ..., B_20
_BERNOULLI_EVEN = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
]
_EM_COEFFS = [float(b / math.factorial(2 * (j + 1))) for j, b in enumerate(_BERNOULLI_EVEN)]


class ZetaValue(NamedTuple):
    value: float
    error_bound: float


def ordered_sum(values) -> float:
    """Correctly rounded sum in a fixed (row-major) order."""
    return math.fsum(np.asarray(values, dtype=float).ravel())


def hurwitz_zeta(s: float, a: float, corrections: int = 8, shift: int | None = None) -> ZetaValue:
    """Hurwitz zeta ``sum_{k>=0} (a + k)**-s`` by Euler-Maclaurin summation.

    Parameters
    ----------
    s : float
        Exponent, ``s > 1``.
    a : float
        Offset, ``a > 0``.
    corrections : int
        Number of Bernoulli correction terms (at least 4).
    shift : int, optional
        Number of leading terms summed explicitly before switching to the
        asymptotic expansion. Chosen automatically when omitted.

    Returns
    -------
    ZetaValue
        The value and a bound on the truncation error of the expansion
        (the magnitude of the first omitted correction term).
    """
    if s <= 1.0:
        raise ValueError(f"Hurwitz zeta diverges for s={s} <= 1")
    if a <= 0.0:
        raise ValueError(f"offset a={a} must be positive")
    if not 4 <= corrections <= len(_EM_COEFFS) - 1:
        raise ValueError(f"corrections must lie in [4, {len(_EM_COEFFS) - 1}]")
    if shift is None:
        shift = max(0, int(math.ceil(12.0 + s - a)))
    head = math.fsum((a + k) ** -s for k in range(shift))
    x = a + shift
    terms = [x ** (1.0 - s) / (s - 1.0), 0.5 * x**-s]
    rising = s  # s (s+1) ... (s+2j-2)
    power = x ** (-s - 1.0)
    for j in range(corrections + 1):
        if j > 0:
            rising *= (s + 2 * j - 1) * (s + 2 * j)
            power /= x * x
        term = _EM_COEFFS[j] * rising * power
        if j == corrections:
            bound = abs(term)
        else:
            terms.append(term)
    return ZetaValue(head + math.fsum(terms), bound)


def riemann_zeta(s: float) -> float:
    return hurwitz_zeta(s, 1.0).value


def difference_quotient(x, y, p: float):
    """``(x**p - y**p) / (x - y)`` for positive ``x, y``, stable as ``x -> y``.

    Written as ``y**(p-1) * expm1(p*log1p(d)) / d`` with ``d = (x - y)/y``; the
    equal-argument limit ``p * y**(p-1)`` is used where ``d`` vanishes.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = (x - y) / y
    safe = np.where(d == 0.0, 1.0, d)
    ratio = np.where(d == 0.0, p, np.expm1(p * np.log1p(safe)) / safe)
    return y ** (p - 1.0) * ratio


def neville_extrapolate(xs: Sequence[float], ys: Sequence[float], x0: float = 0.0) -> float:
    """Value at ``x0`` of the interpolating polynomial through ``(xs, ys)``."""
    xs = [float(v) for v in xs]
    p = [float(v) for v in ys]
    n = len(xs)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = ((x0 - xs[i + k]) * p[i] + (xs[i] - x0) * p[i + 1]) / (xs[i] - xs[i + k])
    return p[0]
