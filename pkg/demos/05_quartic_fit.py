"""Recovering the kappa^2 coefficient of Z(3/2) from numerical spectra.

Z(3/2) is computed from Ritz spectra on kappa = 0.01 .. 0.20 and fitted by a
quartic. The constant and quadratic coefficients are then set against the
analytic values: zeta(3)/pi^3, and -381 zeta(7)/(32 pi^7) plus a double sum.
Takes a few tens of seconds (twenty eigensolves at 2001 modes).
"""

import os

from zeromode_sumrules import kappa_sweep, polyfit, z32_constants

workers = int(os.environ.get("ZEROMODE_SUMRULES_WORKERS", "1"))
samples = kappa_sweep(1.5, workers=workers)
fit = polyfit(samples, 4)
exact = z32_constants()

for j, c in enumerate(fit.coefficients):
    print(f"c{j} = {c: .10e}")
print(f"\nanalytic c0 = {exact.c0:.10f}")
print(f"analytic c2 = {exact.c2:.10f}  (double sum {exact.double_sum:.10f})")
print(f"fit residual {fit.residual_norm:.1e}")
