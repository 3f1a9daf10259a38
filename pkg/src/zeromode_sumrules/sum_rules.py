"""Sum rules ``Z(s) = sum' E_n^{-s}`` of the heterogeneous Neumann string.

Routes
------
perturbative
    renormalized second-order formula :func:`z_tilde`, with the finite-gamma
    expansions :func:`z_orders_at_gamma` and the limit check
    :func:`renormalization_check`.
trace_assembly
    ``Z(1 + 1/N) = sum Q_nr q_rn`` order by order, :func:`z_trace_assembly`.
exact_order1
    ``Z(1)`` from the regularized Green's function, :func:`z1_exact`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._numerics import difference_quotient, hurwitz_zeta, neville_extrapolate, ordered_sum
from .fractional_green import q_coeffs, q_matrices
from .neumann_basis import DEFAULT_TRUNCATION, DensityModel, eigenvalue
from .quadrature import apply_green0, integrate
from .zero_mode_pt import SingularExpansion, e0_inverse_power_terms

S_MIN, S_MAX = 1.0, 1.5


class Route(str, Enum):
    PERTURBATIVE = "perturbative"
    TRACE_ASSEMBLY = "trace_assembly"
    EXACT_ORDER1 = "exact_order1"
    NUMERICAL_SPECTRUM = "numerical_spectrum"


@dataclass(frozen=True)
class SumRuleResult:
    """A sum-rule value with its per-order split and truncation bookkeeping.

    ``value_by_order`` holds the lambda^0, lambda^1, lambda^2 contributions
    for perturbative routes and is None for the others.
    """

    s: float
    total: float
    route: Route
    truncation: int
    tail_estimate: float
    value_by_order: tuple | None = None
    meta: dict = field(default_factory=dict)


def _check_exponent(s: float, allow_any_s: bool):
    if allow_any_s:
        if s <= 0.5:
            raise ValueError("s must exceed 1/2 for the mode sums to converge")
        return
    if not S_MIN < s <= S_MAX:
        raise ValueError(f"s={s} outside (1, 3/2]; pass allow_any_s=True to evaluate anyway")


def _homogeneous_tail(s: float, K: int, gamma: float = 0.0):
    """``sum_{n>K} (n^2 pi^2 + gamma)^(-s)`` to first order in gamma, with an error bound."""
    z = hurwitz_zeta(2 * s, K + 1)
    value = z.value * math.pi ** (-2 * s)
    err = z.error_bound * math.pi ** (-2 * s)
    if gamma:
        z2 = hurwitz_zeta(2 * s + 2, K + 1)
        value -= s * gamma * z2.value * math.pi ** (-2 * s - 2)
        err += 0.5 * s * (s + 1) * gamma**2 * hurwitz_zeta(2 * s + 4, K + 1).value * math.pi ** (-2 * s - 4)
    return value, err


def _pair_sum(s: float, shifted: np.ndarray, eps: np.ndarray, offdiag: np.ndarray):
    """``-(s/2) sum_{n != m} (a_n^{1-s} - a_m^{1-s})/(eps_n - eps_m) |<m|sigma|n>|^2`` plus a shell estimate."""
    kernel = difference_quotient(shifted[:, None], shifted[None, :], 1.0 - s)
    terms = kernel * offdiag**2
    np.fill_diagonal(terms, 0.0)
    full = -0.5 * s * ordered_sum(terms)
    half = terms.shape[0] // 2
    inner = -0.5 * s * ordered_sum(terms[:half, :half])
    return full, abs(full - inner)


def z_tilde(s: float, density: DensityModel, K: int = DEFAULT_TRUNCATION, allow_any_s: bool = False) -> SumRuleResult:
    """Renormalized second-order sum rule over the non-zero eigenvalues.

    ``sum' eps_n^{-s} [1 + s d_n + s(s-1)/2 d_n^2]
    - (s/2) sum'_{n != m} (eps_n^{1-s} - eps_m^{1-s})/(eps_n - eps_m) |<m|sigma|n>|^2
    - s sum' |<0|sigma|n>|^2 eps_n^{-s}``, with ``d_n = <n|sigma|n>``.

    Primed sums run over ``n = 1..K``. The diagonal sums are completed beyond
    ``K`` with Hurwitz zeta tails using ``d_n -> int sigma``; the remaining
    truncation error is estimated from the outermost shell of the double sum.
    """
    _check_exponent(s, allow_any_s)
    table = density.perturbation_table(K + 1)
    eps = eigenvalue(np.arange(1, K + 1)).astype(float)
    diag = np.diag(table)[1:]
    coupling = table[0, 1:] ** 2
    mean = density.mean_perturbation()
    tail, tail_err = _homogeneous_tail(s, K)
    weight = eps**-s

    order0 = ordered_sum(weight) + tail
    order1 = s * (ordered_sum(diag * weight) + mean * tail)
    pair, pair_err = _pair_sum(s, eps, eps, table[1:, 1:])
    zero_mode = -s * ordered_sum(coupling * weight)
    order2 = 0.5 * s * (s - 1.0) * (ordered_sum(diag**2 * weight) + mean**2 * tail) + pair + zero_mode
    zero_err = s * abs(ordered_sum(coupling[K // 2:] * weight[K // 2:]))
    tail_estimate = tail_err * (1.0 + s * abs(mean) + s * s * mean**2) + pair_err + zero_err
    return SumRuleResult(
        s=s,
        total=order0 + order1 + order2,
        route=Route.PERTURBATIVE,
        truncation=K,
        tail_estimate=tail_estimate,
        value_by_order=(order0, order1, order2),
        meta={"zero_mode_term": zero_mode, "pair_term": pair},
    )


@dataclass(frozen=True)
class GammaOrders:
    """``Z^(0), Z^(1), Z^(2)`` at finite gamma, singular gamma powers kept apart."""

    s: float
    gamma: float
    orders: tuple  # three SingularExpansion

    @property
    def values(self) -> tuple:
        return tuple(o.evaluate(self.gamma) for o in self.orders)

    @property
    def total(self) -> SingularExpansion:
        singular: dict = {}
        for o in self.orders:
            for p, c in o.singular.items():
                singular[p] = singular.get(p, 0.0) + c
        return SingularExpansion(sum(o.regular for o in self.orders), singular)


def z_orders_at_gamma(s: float, gamma: float, density: DensityModel, K: int = DEFAULT_TRUNCATION,
                      complete_tail: bool = True) -> GammaOrders:
    """Order-by-order ``Z(s)`` of the shifted problem, zero mode included.

    The zero-mode coupling at second order is
    ``-s sum' [(eps_n + gamma)^{1-s} - gamma^{1-s}] / eps_n |<0|sigma|n>|^2``;
    its ``gamma^{1-s}`` piece is stored as a singular term.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    table = density.perturbation_table(K + 1)
    eps = eigenvalue(np.arange(1, K + 1)).astype(float)
    a = eps + gamma
    c = float(table[0, 0])
    diag = np.diag(table)[1:]
    coupling = table[0, 1:] ** 2
    weight = a**-s
    mean = density.mean_perturbation()
    tail = _homogeneous_tail(s, K, gamma)[0] if complete_tail else 0.0

    z0 = SingularExpansion(ordered_sum(weight) + tail, {-s: 1.0})
    z1 = SingularExpansion(s * (ordered_sum(diag * weight) + mean * tail), {-s: s * c})
    pair, _ = _pair_sum(s, a, eps, table[1:, 1:])
    regular2 = (0.5 * s * (s - 1.0) * (ordered_sum(diag**2 * weight) + mean**2 * tail)
                - s * ordered_sum(a ** (1.0 - s) / eps * coupling) + pair)
    z2 = SingularExpansion(regular2, {-s: 0.5 * s * (s - 1.0) * c * c, 1.0 - s: s * ordered_sum(coupling / eps)})
    return GammaOrders(s, gamma, (z0, z1, z2))


@dataclass(frozen=True)
class RenormalizationReport:
    s: float
    gammas: tuple
    differences: tuple
    singular_mismatch: dict
    limit: float
    z_tilde: float
    distance: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return not self.offending_terms and self.distance <= self.tolerance

    @property
    def offending_terms(self) -> list:
        return [f"gamma^({p:+.6g})" for p, d in self.singular_mismatch.items() if d > self.tolerance]


def _subtract(z: SingularExpansion, counter: SingularExpansion):
    """Regular part of ``z - counter`` and the relative mismatch of each singular power."""
    mismatch = {}
    leftover = 0.0
    for p in sorted(set(z.singular) | set(counter.singular)):
        cz, cc = z.singular.get(p, 0.0), counter.singular.get(p, 0.0)
        mismatch[p] = abs(cz - cc) / max(1.0, abs(cz), abs(cc))
        leftover += cz - cc
    return z.regular - counter.regular, mismatch, leftover


def renormalization_check(s: float, density: DensityModel, K: int = DEFAULT_TRUNCATION,
                          gammas=(1e-3, 1e-4, 1e-5, 1e-6), tolerance: float = 1e-8) -> RenormalizationReport:
    """Check that ``Z(s) - E_0(gamma)^{-s}`` is finite and tends to :func:`z_tilde`.

    The singular coefficients (``gamma^{-s}``, ``gamma^{1-s}``) of both sides
    must agree; the regular remainders are extrapolated to ``gamma = 0`` by
    polynomial (Neville) extrapolation.
    """
    gammas = tuple(float(g) for g in gammas)
    if any(g <= 0.0 for g in gammas) or any(b >= a for a, b in zip(gammas, gammas[1:])):
        raise ValueError("gammas must be positive and strictly decreasing")
    diffs, worst = [], {}
    for g in gammas:
        z = z_orders_at_gamma(s, g, density, K).total
        counter = e0_inverse_power_terms(s, g, density, K)
        regular, mismatch, _ = _subtract(z, counter)
        diffs.append(regular)
        for p, d in mismatch.items():
            worst[p] = max(worst.get(p, 0.0), d)
    limit = neville_extrapolate(gammas, diffs)
    target = z_tilde(s, density, K, allow_any_s=True).total
    return RenormalizationReport(s, gammas, tuple(diffs), worst, limit, target, abs(limit - target), tolerance)


def z_trace_assembly(N: int, gamma: float, density: DensityModel, K: int, square: str = "galerkin") -> tuple:
    """Orders 0, 1, 2 of ``Z(1 + 1/N) = sum_{n,r} Q_nr q_rn`` on modes ``0..K-1``.

    ``<n|sigma^2|m>`` defaults to the Galerkin square of the truncated sigma
    table. With the exact moments instead, the ``gamma^{-s}`` coefficients of
    the three second-order contractions no longer cancel: a remainder
    proportional to ``sum_{r>=K} <0|sigma|r>^2`` survives and is amplified by
    ``gamma^{-s}`` as gamma -> 0.
    """
    if N not in (2, 3):
        raise ValueError("trace assembly is provided for N = 2, 3")
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    q = [c.table for c in q_matrices(N, gamma, density, K, square)]
    Q = [q_coeffs(k, gamma, density, K, square=square).table for k in range(3)]
    contract = lambda A, B: ordered_sum(A * B.T)  # noqa: E731
    return (
        contract(Q[0], q[0]),
        contract(Q[0], q[1]) + contract(Q[1], q[0]),
        contract(Q[1], q[1]) + contract(Q[2], q[0]) + contract(Q[0], q[2]),
    )


def trace_assembly_limit(N: int, density: DensityModel, K: int, gammas=(1e-2, 1e-3, 1e-4)) -> SumRuleResult:
    """Renormalized ``Z(1 + 1/N)`` from the trace route, extrapolated in gamma.

    The truncated order-0 trace is completed with the homogeneous tail beyond
    mode ``K-1`` before the counterterm is subtracted.
    """
    s = 1.0 + 1.0 / N
    diffs = []
    for g in gammas:
        orders = z_trace_assembly(N, g, density, K)
        tail = _homogeneous_tail(s, K - 1, g)[0] * (1.0 + s * density.mean_perturbation())
        counter = e0_inverse_power_terms(s, g, density, K - 1).evaluate(g)
        diffs.append(sum(orders) + tail - counter)
    limit = neville_extrapolate(gammas, diffs)
    return SumRuleResult(s, limit, Route.TRACE_ASSEMBLY, K, abs(diffs[-1] - limit),
                         meta={"gammas": tuple(gammas), "differences": tuple(diffs)})


def z1_exact(density: DensityModel, order: int = 32) -> SumRuleResult:
    """``Z(1) = int Sigma (1/12 + x^2) dx - int int Sigma G0 Sigma / int Sigma``, valid to all orders.

    ``1/12 + x^2`` is the diagonal of the regularized kernel. When ``sigma`` is
    odd the first integral reduces to ``1/6``.
    """
    rho = density.density
    first = integrate(lambda x: rho(x) * (1.0 / 12.0 + x * x), order)
    g_rho = apply_green0(rho, order)
    second = integrate(lambda x: rho(x) * g_rho(x), order) / integrate(rho, order)
    return SumRuleResult(1.0, first - second, Route.EXACT_ORDER1, order, 0.0)
