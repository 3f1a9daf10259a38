"""Green's functions of order 1/N and the trace route to Z(1 + 1/N).

q is the N-th root of the shifted Green's function Q in the Neumann basis,
expanded to second order in the density. Composing q with itself N times
must give Q back; contracting Q with q gives the sum rule of order
1 + 1/N without ever computing an eigenvalue.
"""

from zeromode_sumrules import DensityModel, trace_assembly_limit, verify_composition, z_tilde

density = DensityModel.linear(0.5)

print("composition residual max|q^N - Q| at gamma = 1e-2, reference Q on 240 modes")
for N in (2, 3):
    for k in (1, 2):
        row = [verify_composition(N, k, 1e-2, density, K, reference_size=240) for K in (30, 60, 120)]
        print(f"  N={N} order {k}: " + "  ".join(f"K={K}: {r:.2e}" for K, r in zip((30, 60, 120), row)))

for N in (2, 3):
    s = 1 + 1 / N
    trace = trace_assembly_limit(N, density, 300)
    print(f"\nZ({s:.4f}) by trace assembly {trace.total:.12f}  (extrapolation spread {trace.tail_estimate:.1e})")
    print(f"Z({s:.4f}) perturbative      {z_tilde(s, density).total:.12f}")
