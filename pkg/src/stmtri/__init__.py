"""Numerics for zero-range 2+1 fermion systems at unitarity.

Computes the resonance exponent s(m), the critical mass ratios of each
odd angular sector, the reduced boundary-condition operator with its
tail-coupling constant nu(m), the sector quadratic forms, the
potential-to-charge norm equivalence with explicit Schur constants, and
the explicit lower bound of the self-adjoint extension family.
"""

__version__ = "0.1.0"

from .charges import (ExtensionParams, GaussianBump, GaussianTimesK,
                      PowerLawCharge, RadialGridCharge, SectorCharge)
from .criticality import CriticalPair, RootResult, critical_pair, m_of_s, s_of_m
from .errors import (BracketError, DomainError, IntegrandError,
                     NonConvergedError, RegimeError,
                     RepresentationMismatchError, TailDivergenceError)
from .ffunc import FRep, f_diag, f_offdiag, f_total
from .forms import (BoundReport, LowerConstant, McEstimate, SchurConstants,
                    e0_bound, h_minus_half_norm, lambda1, lower_constant,
                    mc_potential_norm, phi0, phi_lambda, phi_lambda_terms,
                    potential_norm, schur_constants, upper_constant,
                    xi_minus_norm_sq)
from .gamma0 import (NuResult, PairingResult, apply_grid, apply_power,
                     diag_coeff, nu, tail_coeff, xi_minus_pairing)
from .quad import (DEFAULT_SPEC, QuadResult, QuadSpec, SingularityHint,
                   integrate_finite, integrate_semi_infinite)
from .specfun import (SectorIndex, beta_half, inner_radial, legendre,
                      legendre_kernel_moment, odd_moment)

__all__ = [
    "__version__",
    # quad
    "QuadSpec", "QuadResult", "SingularityHint", "DEFAULT_SPEC",
    "integrate_finite", "integrate_semi_infinite",
    # specfun
    "SectorIndex", "legendre", "odd_moment", "beta_half", "inner_radial",
    "legendre_kernel_moment",
    # ffunc
    "FRep", "f_diag", "f_offdiag", "f_total",
    # criticality
    "RootResult", "CriticalPair", "m_of_s", "s_of_m", "critical_pair",
    # charges
    "PowerLawCharge", "GaussianTimesK", "GaussianBump", "RadialGridCharge",
    "SectorCharge", "ExtensionParams",
    # gamma0
    "diag_coeff", "apply_power", "apply_grid", "NuResult", "nu",
    "tail_coeff", "PairingResult", "xi_minus_pairing",
    # forms
    "phi0", "phi_lambda", "phi_lambda_terms", "potential_norm",
    "h_minus_half_norm", "McEstimate", "mc_potential_norm",
    "SchurConstants", "schur_constants", "LowerConstant", "lower_constant",
    "upper_constant", "lambda1", "BoundReport", "e0_bound",
    "xi_minus_norm_sq",
    # errors
    "DomainError", "RegimeError", "IntegrandError", "TailDivergenceError",
    "NonConvergedError", "BracketError", "RepresentationMismatchError",
]
