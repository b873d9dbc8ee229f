"""The reduced boundary-condition operator in the ell = 1 sector.

In that sector the operator acts on radial profiles as

    (G xi)(p) = diag_coeff(m) * p * xi(p)
                + 2 pi * int_0^inf dq q^2 xi(q) * K1(p, q),

where K1 is the P_1-weighted angular moment of the Cauchy-type kernel
1/(p^2 + q^2 + 2 p q t/(m+1)).  The resonance profile k^{-2+s(m)} spans
its formal kernel; this module exposes the operator on power-law and
grid charges, the boundary-condition constant nu(m) by two independent
representations, the coefficient of the subleading charge tail, and the
regularized pairing against the resonance profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import quad
from .charges import (RadialProfile, profile_breakpoints, profile_outer_scale,
                      profile_tail_exponent, profile_values, RadialGridCharge)
from .criticality import critical_pair, s_of_m
from .errors import DomainError, RepresentationMismatchError, TailDivergenceError
from .ffunc import FRep, check_mass, f_diag, f_total
from .quad import DEFAULT_SPEC, QuadSpec, SingularityHint
from .specfun import legendre_kernel_moment

__all__ = [
    "diag_coeff",
    "apply_power",
    "apply_grid",
    "NuResult",
    "nu",
    "tail_coeff",
    "PairingResult",
    "xi_minus_pairing",
]


def diag_coeff(m: float) -> float:
    """Multiplier of the local term: 2 pi^2 sqrt(m(m+2))/(m+1)."""
    return 2.0 * math.pi * f_diag(m)


def apply_power(m: float, s: float, p: float,
                spec: QuadSpec = DEFAULT_SPEC) -> float:
    """Operator applied to the pure power profile k^(-2+s), evaluated at p.

    Scale invariance reduces it to (2 pi / p^(1-s)) * F_1(m, s), so it
    vanishes identically at s = s(m): the resonance profile is a formal
    zero mode.
    """
    check_mass(m)
    if not 0.0 < s < 1.0:
        raise DomainError(f"apply_power requires 0 < s < 1, got {s!r}")
    if not p > 0:
        raise DomainError(f"momentum must be > 0, got {p!r}")
    return 2.0 * math.pi * p ** (s - 1.0) * f_total(1, m, s, FRep.DIRECT_INTEGRAL, spec)


def _cross_kernel(m: float, p: float, q: np.ndarray, lam: float = 0.0) -> np.ndarray:
    """P_1-weighted angular moment of the kernel at momenta (p, q)."""
    a = p * p + q * q + lam
    b = 2.0 * p * q / (m + 1.0)
    return legendre_kernel_moment(1, a, b, power=1)


def apply_grid(m: float, charge: RadialGridCharge, p: float,
               spec: QuadSpec = DEFAULT_SPEC) -> complex:
    """Operator applied at p to a log-grid charge with declared tails.

    Beyond the grid the charge follows its declared power-law exponents;
    convergence of the cross term requires tail decay (exponent < 0) and
    a head no steeper than k^-4.
    """
    check_mass(m)
    if not p > 0:
        raise DomainError(f"momentum must be > 0, got {p!r}")
    if charge.tail_exponent >= 0.0:
        raise TailDivergenceError(
            f"cross term diverges at large k: tail exponent "
            f"{charge.tail_exponent!r} must be < 0"
        )
    if charge.head_exponent <= -4.0:
        raise TailDivergenceError(
            f"cross term diverges at k -> 0: head exponent "
            f"{charge.head_exponent!r} must be > -4"
        )
    diag = diag_coeff(m) * p * complex(profile_values(charge, np.array([p]))[0])

    inner_spec = _integral_spec(spec, charge)

    def integrand_re(q: np.ndarray) -> np.ndarray:
        return (q * q * profile_values(charge, q) * _cross_kernel(m, p, q)).real

    def integrand_im(q: np.ndarray) -> np.ndarray:
        return (q * q * profile_values(charge, q) * _cross_kernel(m, p, q)).imag

    cross_re = quad.integrate_semi_infinite(integrand_re, 0.0, inner_spec).require()
    if any(abs(v.imag) > 0 for v in charge.values):
        cross_im = quad.integrate_semi_infinite(integrand_im, 0.0, inner_spec).require()
    else:
        cross_im = 0.0
    return diag + 2.0 * math.pi * (cross_re + 1j * cross_im)


def _integral_spec(spec: QuadSpec, profile: RadialProfile) -> QuadSpec:
    hints = tuple(SingularityHint(b, 0.0) for b in profile_breakpoints(profile))
    return QuadSpec(rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
                    max_subdivisions=spec.max_subdivisions,
                    singularity_hints=hints)


@dataclass(frozen=True)
class NuResult:
    """nu(m) with its two defining representations and their gap."""

    value: float
    signed: float
    positive: float
    rel_gap: float
    s: float


def _regime_s(m: float, spec: QuadSpec) -> float:
    # raises RegimeError outside (m*, m**)
    return s_of_m(m, spec).value


def nu(m: float, spec: QuadSpec = DEFAULT_SPEC) -> NuResult:
    """The positive constant multiplying the subleading charge tail.

    Computed by BOTH the signed triple integral

        -2 pi int_1^inf dp/p int_{-1}^{1} dt t
              int_0^{1/p} dq q^{-s} / (q^2 + 1 + 2qt/(m+1))

    and the antisymmetrized, manifestly positive triple integral

        (8 pi/(m+1)) int_1^inf dp/p int_0^1 dt t^2
              int_0^{1/p} dq q^{1-s} / ((q^2+1)^2 - 4 t^2 q^2/(m+1)^2).

    The signed form is returned; a relative gap above 1e-6 between the
    two raises, since that signals an implementation bug rather than a
    numerical fluke.
    """
    s = _regime_s(m, spec)
    signed = _nu_signed(m, s, spec)
    positive = _nu_positive(m, s, spec)
    rel_gap = abs(signed - positive) / abs(signed)
    if rel_gap > 1e-6:
        raise RepresentationMismatchError(
            f"nu({m!r}): signed={signed!r} and positive={positive!r} "
            f"representations disagree (rel gap {rel_gap:.3e})"
        )
    return NuResult(signed, signed, positive, rel_gap, s)


# the middle (angular) integrals of both nu representations cancel to
# near zero for small upper limits, so they carry absolute tolerances
# anchored to nu's O(1) scale instead of relative ones
_NU_MID = QuadSpec(rel_tol=1e-10, abs_tol=1e-13, max_subdivisions=400)
_NU_INNER = QuadSpec(rel_tol=1e-11, abs_tol=1e-15, max_subdivisions=400)


def _nu_signed(m: float, s: float, spec: QuadSpec) -> float:
    mid_spec = _NU_MID
    inner_spec = _NU_INNER.with_hints(SingularityHint(0.0, -s))
    two_over = 2.0 / (m + 1.0)

    def inner(t: float, upper: float) -> float:
        def fq(q: np.ndarray) -> np.ndarray:
            return q ** (-s) / (q * q + 1.0 + two_over * t * q)

        return quad.integrate_finite(fq, 0.0, upper, inner_spec).require()

    def middle(upper: float) -> float:
        def ft(t: np.ndarray) -> np.ndarray:
            return np.array([ti * inner(float(ti), upper) for ti in t])

        return quad.integrate_finite(ft, -1.0, 1.0, mid_spec).require()

    def outer(p: np.ndarray) -> np.ndarray:
        return np.array([middle(1.0 / pi) / pi for pi in p])

    val = quad.integrate_semi_infinite(outer, 1.0, _outer_nu_spec(spec)).require()
    return -2.0 * math.pi * val


def _outer_nu_spec(spec: QuadSpec) -> QuadSpec:
    return QuadSpec(rel_tol=max(spec.rel_tol, 1e-10), abs_tol=1e-12,
                    max_subdivisions=spec.max_subdivisions)


def _nu_positive(m: float, s: float, spec: QuadSpec) -> float:
    mid_spec = _NU_MID
    inner_spec = _NU_INNER
    c2 = (2.0 / (m + 1.0)) ** 2

    def inner(t: float, upper: float) -> float:
        def fq(q: np.ndarray) -> np.ndarray:
            q2 = q * q
            return q ** (1.0 - s) / ((q2 + 1.0) ** 2 - c2 * t * t * q2)

        return quad.integrate_finite(fq, 0.0, upper, inner_spec).require()

    def middle(upper: float) -> float:
        def ft(t: np.ndarray) -> np.ndarray:
            return np.array([ti * ti * inner(float(ti), upper) for ti in t])

        return quad.integrate_finite(ft, 0.0, 1.0, mid_spec).require()

    def outer(p: np.ndarray) -> np.ndarray:
        return np.array([middle(1.0 / pi) / pi for pi in p])

    val = quad.integrate_semi_infinite(outer, 1.0, _outer_nu_spec(spec)).require()
    return 8.0 * math.pi / (m + 1.0) * val


def tail_coeff(beta: float, q: complex, m: float,
               spec: QuadSpec = DEFAULT_SPEC) -> complex:
    """Coefficient of k^(-2-s(m)) in the charge tail: beta * q / nu(m).

    beta = 0 (the largest-domain extension) forces no subleading tail.
    """
    if beta == 0.0:
        return 0.0 + 0.0j
    return beta * q / nu(m, spec).value


@dataclass(frozen=True)
class PairingResult:
    """Regularized pairing of a charge against the resonance profile."""

    value: float
    samples: tuple[float, ...]
    eps_values: tuple[float, ...]
    s: float


def xi_minus_pairing(m: float, profile: RadialProfile,
                     spec: QuadSpec = DEFAULT_SPEC,
                     eps_values: tuple[float, ...] = (1e-2, 1e-3, 1e-4),
                     ) -> PairingResult:
    """lim_{eps -> 0} of int_eps^inf dp p^2 k^(s-2) (G profile)(p).

    The local and integral terms of the operator each diverge
    logarithmically at large p; only their pointwise sum is integrable
    (the resonance condition cancels the leading 1/p behavior), so the
    combined integrand is assembled per abscissa.  The eps -> 0 limit is
    taken by Richardson extrapolation in eps^(2 s(m)) over ``eps_values``.
    """
    s = _regime_s(m, spec)
    dc = diag_coeff(m)
    inner_spec = spec.tightened(1e-3)
    tail = profile_tail_exponent(profile)
    if tail >= -1.0 - s:
        raise TailDivergenceError(
            f"pairing diverges: profile tail exponent {tail!r} must be "
            f"below {-1.0 - s!r}"
        )

    def cross(p: float) -> float:
        def fq(q: np.ndarray) -> np.ndarray:
            return (q * q * profile_values(profile, q).real
                    * _cross_kernel(m, p, q))

        return quad.integrate_semi_infinite(fq, 0.0,
                                            _integral_spec(inner_spec, profile)
                                            ).require()

    def combined(p: np.ndarray) -> np.ndarray:
        local = dc * p * profile_values(profile, p).real
        return p**s * np.array([local[i] + 2.0 * math.pi * cross(float(pi))
                                for i, pi in enumerate(p)])

    # whatever the profile, the combined integrand decays like p^(s-3)
    # (set by the kernel's momentum moment), so the tail is integrated by
    # power-law extrapolation past a split point clear of the breakpoints
    hints = tuple(SingularityHint(b, 0.0) for b in profile_breakpoints(profile))
    hints += (SingularityHint(profile_outer_scale(profile), 0.0),
              SingularityHint(math.inf, s - 3.0),)
    # the pairing feeds 1e-5/1e-6-level consistency checks on an O(1)
    # quantity; the tail-extrapolation residual sits around 1e-7
    outer_spec = QuadSpec(rel_tol=1e-7, abs_tol=3e-7,
                          max_subdivisions=spec.max_subdivisions,
                          singularity_hints=hints)
    samples = tuple(
        quad.integrate_semi_infinite(combined, eps, outer_spec).require()
        for eps in eps_values
    )
    value = _richardson(samples, eps_values, 2.0 * s)
    return PairingResult(value, samples, tuple(eps_values), s)


def _richardson(samples, eps_values, order: float) -> float:
    vals = list(samples)
    eps = list(eps_values)
    while len(vals) > 1:
        new_vals, new_eps = [], []
        for i in range(len(vals) - 1):
            r = (eps[i + 1] / eps[i]) ** order
            new_vals.append((vals[i + 1] - r * vals[i]) / (1.0 - r))
            new_eps.append(eps[i + 1])
        vals, eps = new_vals, new_eps
    return vals[0]
