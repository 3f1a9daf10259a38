import math

import numpy as np
import pytest
from scipy.linalg import eig

from zeromode_sumrules import DensityModel, e0_inverse_power, e0_series, psi0_correction
from zeromode_sumrules.neumann_basis import eigenvalue, mode, polynomial_table
from zeromode_sumrules.quadrature import gauss_legendre, integrate
from zeromode_sumrules.zero_mode_pt import e0_inverse_power_terms, recursive_energies


def contour_coefficients(density, orders=4, K=120, radius=1.0, points=64):
    """Taylor coefficients of the lowest shifted eigenvalue by a Cauchy integral over complex gamma."""
    M = density.mass_table(K)
    e = eigenvalue(np.arange(K)).astype(float)
    theta = 2 * np.pi * np.arange(points) / points
    values = []
    for g in radius * np.exp(1j * theta):
        w = eig(np.diag(e + g), M, right=False)
        values.append(w[np.argmin(np.abs(w - g))])
    values = np.asarray(values)
    return [float(np.real(np.mean(values * np.exp(-1j * k * theta)))) / radius**k for k in range(1, orders + 1)]


def test_homogeneous_series():
    assert e0_series(DensityModel.homogeneous()).energies == pytest.approx((1.0, 0.0, 0.0, 0.0), abs=1e-15)


@pytest.mark.parametrize("kappa", [0.3, 1.0])
def test_second_order_two_oracles(kappa):
    d = DensityModel.linear(kappa)
    spectral = e0_series(d, 2).energies
    quad = e0_series(d, 2, method="quadrature").energies
    assert spectral[0] == pytest.approx(1.0, abs=1e-15)
    assert spectral[1] == pytest.approx(-kappa**2 / 120, abs=1e-9)
    assert quad[1] == pytest.approx(-kappa**2 / 120, abs=1e-9)
    assert spectral[1] == pytest.approx(quad[1], abs=1e-9)


@pytest.mark.parametrize("density", [DensityModel.linear(0.8), DensityModel((0.2, -0.5, 0.7))])
def test_third_order_two_oracles(density):
    a = e0_series(density, 4).energies
    b = e0_series(density, 4, method="quadrature").energies
    assert a[2] == pytest.approx(b[2], abs=1e-9)
    assert a[3] == pytest.approx(b[3], abs=1e-9)


@pytest.mark.parametrize("density", [DensityModel.linear(0.5), DensityModel.linear(1.0), DensityModel((0.3, 1.0, 0.5))])
def test_series_matches_contour_integral(density):
    expected = contour_coefficients(density)
    got = e0_series(density, 4).energies
    assert got == pytest.approx(expected, rel=0, abs=5e-11)


def test_recursion_matches_trace_formulas():
    d = DensityModel.linear(0.5)
    rec, _ = recursive_energies(d, 3)
    closed = e0_series(d, 3).energies
    assert rec[1] == pytest.approx(closed[1], abs=1e-8)
    assert rec[2] == pytest.approx(closed[2], abs=1e-8)


@pytest.mark.parametrize("coeffs", [(0.0, 0.9), (0.1, -0.4, 1.2), (-0.3, 0.0, 0.0, 2.0)])
def test_second_order_nonpositive(coeffs):
    assert e0_series(DensityModel(coeffs), 2).energies[1] <= 0.0


def test_invalid_order():
    with pytest.raises(ValueError):
        e0_series(DensityModel.linear(0.1), 5)
    with pytest.raises(ValueError):
        e0_series(DensityModel.linear(0.1), method="magic")


class TestWavefunction:
    x = np.linspace(-0.5, 0.5, 9)

    def test_order_zero_constant(self):
        assert np.all(psi0_correction(DensityModel.linear(0.4), 0)(self.x) == 1.0)

    def test_homogeneous_first_order_vanishes(self):
        assert np.abs(psi0_correction(DensityModel.homogeneous(), 1)(self.x)).max() < 1e-15

    def test_first_order_spectral_expansion(self):
        kappa = 0.6
        psi1 = psi0_correction(DensityModel.linear(kappa), 1)(self.x)
        n = np.arange(1, 400)
        x_elements = polynomial_table([0.0, 1.0], 400)[0, 1:]
        expected = kappa * sum(mode(k, self.x) * x_elements[k - 1] / eigenvalue(k) for k in n)
        assert np.allclose(psi1, expected, atol=1e-11)

    @pytest.mark.parametrize("k", [1, 2])
    def test_orthogonal_to_constant(self, k):
        psi = psi0_correction(DensityModel((0.1, 0.7, -0.4)), k)
        assert abs(integrate(psi, 30)) < 1e-10

    def test_second_order_operator_residual(self):
        # -psi2'' + psi1 = E1 rho psi1 + E2 rho, tested mode by mode: eps_n <n|psi2> = <n|source>
        d = DensityModel.linear(0.7)
        energies, psis = recursive_energies(d, 3)
        x, w = gauss_legendre(60)
        rho = d.density(x)
        source = energies[0] * rho * psis[1](x) + energies[1] * rho - psis[1](x)
        psi2 = psis[2](x)
        for n in range(1, 12):
            phi = mode(n, x)
            assert abs(eigenvalue(n) * np.dot(w, phi * psi2) - np.dot(w, phi * source)) < 1e-8

    def test_order_bound(self):
        with pytest.raises(ValueError):
            psi0_correction(DensityModel.linear(0.1), 3)


class TestInversePower:
    def test_homogeneous(self):
        for s in (1.25, 1.5):
            assert e0_inverse_power(s, 1e-3, DensityModel.homogeneous()) == pytest.approx(1e-3**-s, rel=1e-15)

    def test_linear_terms(self):
        kappa, s, g = 0.4, 1.5, 1e-3
        terms = e0_inverse_power_terms(s, g, DensityModel.linear(kappa))
        assert terms.singular[-s] == 1.0
        assert terms.singular[1 - s] == pytest.approx(s * kappa**2 / 120, rel=1e-12)

    @pytest.mark.parametrize("kappa", [0.1, 0.2])
    def test_matches_series_power(self, kappa):
        # the second-order expansion reproduces (E1 g + E2 g^2 + E3 g^3)^(-s) through gamma^(1-s);
        # E3 has no kappa^2 part, so the residual is of order kappa^4 gamma^(2-s)
        s = 1.5
        d = DensityModel.linear(kappa)
        E = e0_series(d, 3).energies
        for g in (1e-3, 1e-4, 1e-5):
            direct = (E[0] * g + E[1] * g**2 + E[2] * g**3) ** -s
            resid = abs(direct - e0_inverse_power(s, g, d))
            assert resid <= 10 * kappa**4 * g ** (2 - s) + 64 * np.finfo(float).eps * g**-s

    def test_optional_gamma2_term_is_second_order_in_density(self):
        d = DensityModel.linear(0.2)
        s, g = 1.5, 1e-4
        E = e0_series(d, 3).energies
        direct = (E[0] * g + E[1] * g**2 + E[2] * g**3) ** -s
        with_term = e0_inverse_power(s, g, d, include_gamma2_term=True)
        # the extra term misses the series by s * kappa^2 * sum' <0|x|n>^2 / eps_n^2 * gamma^(2-s)
        v = polynomial_table([0.0, 0.2], 500)[0, 1:]
        extra = s * np.sum(v**2 / eigenvalue(np.arange(1, 500)) ** 2) * g ** (2 - s)
        quartic = (0.5 * s * (s + 1) * E[1] ** 2 - s * E[2]) * g ** (2 - s)
        assert direct - with_term == pytest.approx(extra + quartic, abs=1e-9)

    def test_continuity_towards_unit_exponent(self):
        d = DensityModel.linear(0.5)
        g = 1e-3
        at_one = e0_inverse_power_terms(1.0 + 1e-12, g, d).singular
        near = e0_inverse_power_terms(1.0 + 1e-6, g, d).singular
        assert near[-(1.0 + 1e-6)] == pytest.approx(1.0)
        coeff_one = next(v for p, v in at_one.items() if p > -0.5)
        coeff_near = next(v for p, v in near.items() if p > -0.5)
        assert coeff_one == pytest.approx(0.25 / 120, rel=1e-9)
        assert coeff_near == pytest.approx(coeff_one, rel=2e-6)

    def test_rejects_nonpositive_gamma(self):
        with pytest.raises(ValueError):
            e0_inverse_power(1.5, 0.0, DensityModel.linear(0.1))
