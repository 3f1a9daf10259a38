"""A uniform string: every route must return zeta(2s)/pi^(2s).

With Sigma = 1 the Neumann eigenvalues are n^2 pi^2, so the sum rule of
order s is a Riemann zeta value. This is the baseline every other demo
perturbs away from.
"""

import math

from scipy.special import zeta

from zeromode_sumrules import DensityModel, z_numerical, z_tilde

uniform = DensityModel.homogeneous()
print(f"{'s':>6} {'zeta(2s)/pi^2s':>20} {'perturbative':>20} {'Ritz + tail':>20}")
for s in (1.1, 1.25, 4 / 3, 1.5):
    exact = zeta(2 * s) / math.pi ** (2 * s)
    print(f"{s:6.4f} {exact:20.15f} {z_tilde(s, uniform).total:20.15f} {z_numerical(s, 0.0, basis_size=401).total:20.15f}")
