"""Expansion of the shifted fundamental mode in the shift gamma.

For ``(-d^2/dx^2 + gamma) Psi_0 = E_0(gamma) Sigma Psi_0`` one has
``E_0(gamma) = sum_j gamma^j E_0^(j)``. The coefficients are available as
closed traces of the regularized Green's functions (spectral sums over exact
matrix elements) and, independently, from the order-by-order recursion built
with quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._numerics import ordered_sum
from .neumann_basis import DensityModel, eigenvalue
from .quadrature import apply_green0, integrate

DEFAULT_K = 400


@dataclass(frozen=True)
class Traces:
    """Traces ``<0|Sigma G.. Sigma|0>`` entering the energy coefficients.

    ``sigma00`` is ``<0|Sigma|0>``; ``g0`` is ``<0|Sigma G0 Sigma|0>``,
    ``g0g0`` is ``<0|Sigma G0 Sigma G0 Sigma|0>`` and so on.
    """

    sigma00: float
    g0: float
    g1: float
    g2: float
    g0g0: float
    g1g0: float
    g0g0g0: float


@dataclass(frozen=True)
class ZeroModeSeries:
    """Coefficients ``E_0^(1..max_order)`` (``energies[0]`` is ``E_0^(1)``)."""

    energies: tuple
    traces: Traces

    def energy(self, gamma: float) -> float:
        return sum(e * gamma ** (j + 1) for j, e in enumerate(self.energies))


def spectral_traces(density: DensityModel, K: int = DEFAULT_K) -> Traces:
    mass = density.mass_table(K + 1)
    e = eigenvalue(np.arange(1, K + 1)).astype(float)
    v = mass[0, 1:]
    inner = mass[1:, 1:]
    u0 = v / e
    u1 = v / e**2
    return Traces(
        sigma00=float(mass[0, 0]),
        g0=ordered_sum(v * u0),
        g1=ordered_sum(v * u1),
        g2=ordered_sum(v * v / e**3),
        g0g0=float(u0 @ inner @ u0),
        g1g0=float(u1 @ inner @ u0),
        g0g0g0=float(u0 @ inner @ (inner @ u0 / e)),
    )


def quadrature_traces(density: DensityModel, order: int = 24) -> Traces:
    """Same traces by nested Gauss-Legendre quadrature of the closed-form ``G0``."""
    rho = density.density
    f1 = apply_green0(rho, order)                    # G0 Sigma
    f2 = apply_green0(f1, order)                     # G1 Sigma = G0 G0 Sigma
    h = apply_green0(lambda y: rho(y) * f1(y), order)  # G0 Sigma G0 Sigma
    quad = lambda f: integrate(f, order)  # noqa: E731
    return Traces(
        sigma00=quad(rho),
        g0=quad(lambda x: rho(x) * f1(x)),
        g1=quad(lambda x: f1(x) ** 2),
        g2=quad(lambda x: f1(x) * f2(x)),
        g0g0=quad(lambda x: f1(x) * rho(x) * f1(x)),
        g1g0=quad(lambda x: f2(x) * rho(x) * f1(x)),
        g0g0g0=quad(lambda x: f1(x) * rho(x) * h(x)),
    )


def energies_from_traces(t: Traces, max_order: int = 4) -> tuple:
    s = t.sigma00
    e = [
        1.0 / s,
        -t.g0 / s**3,
        t.g1 / s**3 - t.g0g0 / s**4 + 2.0 * t.g0**2 / s**5,
        (-t.g2 / s**3 + 2.0 * t.g1g0 / s**4 - 4.0 * t.g1 * t.g0 / s**5 - 5.0 * t.g0**3 / s**7
         + 5.0 * t.g0 * t.g0g0 / s**6 - t.g0g0g0 / s**5),
    ]
    return tuple(e[:max_order])


def e0_series(density: DensityModel, max_order: int = 4, K: int = DEFAULT_K,
              method: str = "spectral", quad_order: int = 24) -> ZeroModeSeries:
    """Energy coefficients ``E_0^(1..max_order)`` from the closed trace formulas.

    ``method`` selects how the traces are evaluated: ``"spectral"`` (truncated
    mode sums with exact matrix elements) or ``"quadrature"`` (nested
    Gauss-Legendre on the closed-form kernel).
    """
    if not 1 <= max_order <= 4:
        raise ValueError("max_order must lie in 1..4")
    if method == "spectral":
        traces = spectral_traces(density, K)
    elif method == "quadrature":
        traces = quadrature_traces(density, quad_order)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ZeroModeSeries(energies_from_traces(traces, max_order), traces)


def recursive_energies(density: DensityModel, max_order: int = 3, quad_order: int = 24):
    """Energies and wave-function corrections from the order-by-order recursion.

    Returns ``(energies, psis)`` where ``energies[j-1] = E_0^(j)`` and
    ``psis[k]`` is the callable ``Psi_0^(k)``, everything built by quadrature.
    """
    if not 1 <= max_order <= 3:
        raise ValueError("the recursion is provided up to third order")
    rho = density.density
    norm = integrate(rho, quad_order)
    psis: list[Callable] = [lambda x: np.ones_like(np.asarray(x, dtype=float))]
    energies: list[float] = [1.0 / norm]
    for k in range(1, max_order + 1):
        if k > 1:
            overlap = sum(
                energies[j - 1] * integrate(lambda x, f=psis[k - j]: rho(x) * f(x), quad_order)
                for j in range(1, k)
            )
            energies.append(-overlap / norm)
        if k < max_order:
            psis.append(_next_psi(k, energies, psis, rho, quad_order))
    return tuple(energies), psis


def _next_psi(k, energies, psis, rho, quad_order):
    def source(y):
        total = sum(energies[j - 1] * rho(y) * psis[k - j](y) for j in range(1, k + 1))
        return total - psis[k - 1](y)

    return apply_green0(source, quad_order)


def psi0_correction(density: DensityModel, k: int, quad_order: int = 24) -> Callable:
    """Wave-function correction ``Psi_0^(k)`` (``k <= 2``) on [-1/2, 1/2].

    Built from the recursion ``Psi^(k) = sum_j E^(j) G0[Sigma Psi^(k-j)] - G0[Psi^(k-1)]``
    with the regularized kernel, so every correction with ``k >= 1`` is
    orthogonal to the constant mode.
    """
    if not 0 <= k <= 2:
        raise ValueError("corrections are provided for k = 0, 1, 2")
    _, psis = recursive_energies(density, max_order=k + 1, quad_order=quad_order)
    return psis[k]


@dataclass(frozen=True)
class SingularExpansion:
    """``regular + sum_p coeff_p * gamma**p`` with the singular powers kept apart."""

    regular: float
    singular: dict

    def evaluate(self, gamma: float) -> float:
        return self.regular + sum(c * gamma**p for p, c in self.singular.items())


def e0_inverse_power_terms(s: float, gamma: float, density: DensityModel, K: int = DEFAULT_K,
                           include_gamma2_term: bool = False) -> SingularExpansion:
    """Terms of ``E_0(gamma)**(-s)`` to second order in the density.

    ``gamma**(-s) (1 + s c + s(s-1)/2 c^2) + s gamma**(1-s) sum' <0|sigma|n>^2 / eps_n``
    with ``c = <0|sigma|0>``. At second order in sigma the ``gamma**3`` energy
    coefficient cancels (the G1 trace against the iterated G0 trace), so the
    ``- s gamma**(2-s) sum' <0|sigma|n>^2 / eps_n^2`` term is only added when
    ``include_gamma2_term`` is set.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    table = density.perturbation_table(K + 1)
    c = float(table[0, 0])
    v2 = table[0, 1:] ** 2
    e = eigenvalue(np.arange(1, K + 1)).astype(float)
    singular = {
        -s: 1.0 + s * c + 0.5 * s * (s - 1.0) * c * c,
        1.0 - s: s * ordered_sum(v2 / e),
    }
    if include_gamma2_term:
        singular[2.0 - s] = -s * ordered_sum(v2 / e**2)
    return SingularExpansion(0.0, singular)


def e0_inverse_power(s: float, gamma: float, density: DensityModel, K: int = DEFAULT_K,
                     include_gamma2_term: bool = False) -> float:
    """Second-order expansion of ``E_0(gamma)**(-s)`` (the renormalization counterterm)."""
    return e0_inverse_power_terms(s, gamma, density, K, include_gamma2_term).evaluate(gamma)
