"""The resonance function F_ell(m, s) = F_diag(m) + F_offdiag(ell, m, s),
whose zero in s (at fixed mass ratio m) locates the resonance exponent and
whose zeros in m (at s = 0, 1) are the critical mass ratios.

Three independent representations of the off-diagonal term are provided
and cross-checked against each other:

  DIRECT_INTEGRAL   outer t-integral of the closed-form inner radial
                    integral (valid for s < 1 only; the inner integral
                    diverges at s = 1),
  ANTISYMMETRIZED   the folded t in [0, 1] form with the combined kernel
                    -(4/(m+1)) t P_ell(t) p^{s+1} / ((p^2+1)^2 - 4 t^2 p^2/(m+1)^2),
                    finite up to and including s = 1,
  SERIES            an absolutely convergent alternating-free series whose
                    p-integrals reduce to Beta functions via log-Gamma.
"""

from __future__ import annotations

import enum
import math

import numpy as np
from scipy.special import gammaln

from . import quad
from .errors import DomainError, NonConvergedError
from .quad import DEFAULT_SPEC, QuadSpec, SingularityHint
from .specfun import inner_radial, legendre, require_odd

__all__ = ["FRep", "f_diag", "f_offdiag", "f_total", "SERIES_TERM_BUDGET"]


class FRep(enum.Enum):
    DIRECT_INTEGRAL = "direct"
    ANTISYMMETRIZED = "antisym"
    SERIES = "series"


# Geometric tail ratio of the series is 1/(m+1)^2, so small mass ratios
# need many terms: ~230 at m = 0.05 for 1e-10 relative truncation.
SERIES_TERM_BUDGET = 500


def check_mass(m: float) -> float:
    if not (isinstance(m, (int, float)) and math.isfinite(m) and m > 0):
        raise DomainError(f"mass ratio must be finite and > 0, got {m!r}")
    return float(m)


def f_diag(m: float) -> float:
    """Diagonal part pi*sqrt(m(m+2))/(m+1); increasing, range (0, pi)."""
    check_mass(m)
    return math.pi * math.sqrt(m * (m + 2.0)) / (m + 1.0)


def _check_s(s: float, rep: FRep) -> float:
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s must lie in [0, 1], got {s!r}")
    if s == 1.0 and rep is FRep.DIRECT_INTEGRAL:
        raise DomainError(
            "the direct-integral representation diverges at s = 1; "
            "use ANTISYMMETRIZED or SERIES"
        )
    return float(s)


def _offdiag_direct(ell: int, m: float, s: float, spec: QuadSpec) -> float:
    # the inner radial integral blows up like 1/sqrt(1+t) at t -> -1 as
    # m -> 0; declaring the endpoint routes that piece to tanh-sinh
    b_scale = 1.0 / (m + 1.0)

    def integrand(t: np.ndarray) -> np.ndarray:
        return legendre(ell, t) * inner_radial(b_scale * t, s)

    hinted = quad.QuadSpec(
        rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
        max_subdivisions=spec.max_subdivisions,
        singularity_hints=(SingularityHint(-1.0, -0.5),),
    )
    return quad.integrate_finite(integrand, -1.0, 1.0, hinted).require()


def _offdiag_antisym(ell: int, m: float, s: float, spec: QuadSpec) -> float:
    # one order tighter inside; the inner integrand develops a 1/m-high
    # spike near p = 1 as m -> 0, where demanding much more than 1e-11
    # relative just chases the error-estimator plateau
    inner_spec = spec.tightened(1e-1)
    c_scale = 2.0 / (m + 1.0)

    def radial(t: float) -> float:
        c2 = (c_scale * t) ** 2

        def integrand(p: np.ndarray) -> np.ndarray:
            p2 = p * p
            return p**(s + 1.0) / ((p2 + 1.0) ** 2 - c2 * p2)

        return quad.integrate_semi_infinite(integrand, 0.0, inner_spec).require()

    def outer(t: np.ndarray) -> np.ndarray:
        pl = legendre(ell, t)
        return np.array([ti * pli * radial(float(ti))
                         for ti, pli in zip(t, np.atleast_1d(pl))])

    outer_spec = quad.QuadSpec(rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
                               max_subdivisions=spec.max_subdivisions)
    val = quad.integrate_finite(outer, 0.0, 1.0, outer_spec).require()
    return -4.0 / (m + 1.0) * val


def _offdiag_series(ell: int, m: float, s: float, spec: QuadSpec) -> float:
    """Series form: every term is positive, the sum enters with one global
    minus sign, and each p-integral is a Beta function.

    The ratio bound is not assumed a priori: truncation requires the term
    both below rel_tol * |partial sum| and smaller than its predecessor.
    """
    log_x = math.log(2.0 / (m + 1.0))
    log_half = -math.log(2.0)
    total = 0.0
    prev_term = math.inf
    for k in range(SERIES_TERM_BUDGET):
        n_pow = 2 * k + ell
        log_binom = gammaln(n_pow + 1) - gammaln(n_pow - ell + 1) - gammaln(ell + 1)
        log_beta = (gammaln(k + 0.5) + gammaln(ell + 1.0)
                    - gammaln(k + ell + 1.5))
        log_pint = (log_half + gammaln((s + n_pow + 1) / 2.0)
                    + gammaln((n_pow + 1 - s) / 2.0) - gammaln(n_pow + 1.0))
        term = math.exp(n_pow * log_x + log_binom + log_beta + log_pint
                        - ell * math.log(2.0))
        total += term
        if k > 0 and term < spec.rel_tol * abs(total) and term < prev_term:
            return -total
        prev_term = term
    raise NonConvergedError(
        f"series for F_(ell={ell},2)({m!r}, {s!r}) did not reach rel_tol="
        f"{spec.rel_tol!r} within {SERIES_TERM_BUDGET} terms; "
        "fall back to the ANTISYMMETRIZED representation"
    )


def f_offdiag(ell: int, m: float, s: float,
              rep: FRep = FRep.DIRECT_INTEGRAL,
              spec: QuadSpec = DEFAULT_SPEC) -> float:
    """Off-diagonal term F_{ell,2}(m, s); strictly negative for odd ell."""
    require_odd(ell)
    check_mass(m)
    _check_s(s, rep)
    if rep is FRep.DIRECT_INTEGRAL:
        return _offdiag_direct(ell, m, s, spec)
    if rep is FRep.ANTISYMMETRIZED:
        return _offdiag_antisym(ell, m, s, spec)
    if rep is FRep.SERIES:
        return _offdiag_series(ell, m, s, spec)
    raise DomainError(f"unknown representation {rep!r}")


def f_total(ell: int, m: float, s: float,
            rep: FRep = FRep.DIRECT_INTEGRAL,
            spec: QuadSpec = DEFAULT_SPEC) -> float:
    """F_ell(m, s) = f_diag(m) + f_offdiag(ell, m, s)."""
    return f_diag(m) + f_offdiag(ell, m, s, rep, spec)
