"""The numerical spectrum and its asymptotic tail.

Rayleigh-Ritz in 2001 Neumann modes gives the levels directly. Beyond
n_max = 200 they are replaced by the WKB law E_n ~ c(kappa) n^2, whose sum
is a Hurwitz zeta value.
"""

from zeromode_sumrules import DensityModel, asymptotic_level, solve, z_numerical

kappa = 0.2
spectrum = solve(DensityModel.linear(kappa), 2001)
print(f"kappa = {kappa}: lowest level {spectrum.eigenvalues[0]:.1e} (the exact zero mode)")
print(f"{'n':>5} {'E_n (Ritz)':>22} {'E_n (asymptotic)':>22} {'ratio - 1':>12}")
for n in (1, 2, 5, 10, 50, 100, 200):
    e, a = spectrum.eigenvalues[n], asymptotic_level(n, kappa)
    print(f"{n:5d} {e:22.12f} {a:22.12f} {e / a - 1:12.3e}")

for s in (1.0, 1.5):
    r = z_numerical(s, kappa, spectrum=spectrum)
    print(f"\nZ({s}) = {r.meta['head']:.15f} (levels 1..200) + {r.meta['tail']:.3e} (tail)")
    print(f"       = {r.total:.15f} +- {r.tail_estimate:.1e}")
print(f"exact Z(1) = {1 / 6 - kappa**2 / 120:.15f}")
