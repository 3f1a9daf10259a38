"""Spectral sum rules of rational order for a heterogeneous Neumann string.

Three independent routes are provided and cross-checked against each other:

* perturbative: renormalized second-order formula (:mod:`.sum_rules`)
* trace assembly: contraction of the Green's function of order 1 with the
  Green's function of order 1/N (:mod:`.fractional_green`)
* numerical: Rayleigh-Ritz spectrum completed by an asymptotic tail
  (:mod:`.rr_spectrum`)
"""

from .neumann_basis import DensityModel, NeumannBasis, eigenvalue, green_q, green_regularized, sigma_element
from .fractional_green import q_coeffs, q_matrices, verify_composition
from .zero_mode_pt import e0_inverse_power, e0_series, psi0_correction
from .sum_rules import (
    Route,
    SumRuleResult,
    renormalization_check,
    trace_assembly_limit,
    z1_exact,
    z_orders_at_gamma,
    z_tilde,
    z_trace_assembly,
)
from .rr_spectrum import asymptotic_level, solve, tail_sum, z_numerical
from .analysis_fit import kappa_sweep, polyfit, sweep_results, z32_constants

__version__ = "0.1.0"

__all__ = [
    "DensityModel",
    "NeumannBasis",
    "Route",
    "SumRuleResult",
    "asymptotic_level",
    "e0_inverse_power",
    "e0_series",
    "eigenvalue",
    "green_q",
    "green_regularized",
    "kappa_sweep",
    "polyfit",
    "psi0_correction",
    "q_coeffs",
    "q_matrices",
    "renormalization_check",
    "sigma_element",
    "solve",
    "sweep_results",
    "tail_sum",
    "trace_assembly_limit",
    "verify_composition",
    "z1_exact",
    "z32_constants",
    "z_numerical",
    "z_orders_at_gamma",
    "z_tilde",
    "z_trace_assembly",
]
