"""Sector quadratic forms, the potential-norm equivalence with its Schur
constants, the spectral surrogate entering the coercivity constant, and
the explicit lower bound on the extension family.

All reductions to radial integrals go through the Legendre-weighted
angular moments of specfun; the 6-D potential norm has an independent
seeded Monte-Carlo oracle used by the test suite to certify the
reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quad
from .charges import (ExtensionParams, SectorCharge, profile_breakpoints,
                      profile_head_exponent, profile_outer_scale,
                      profile_support, profile_tail_exponent, profile_values)
from .criticality import critical_pair, s_of_m
from .errors import DomainError, NonConvergedError
from .ffunc import FRep, check_mass, f_diag, f_offdiag
from .gamma0 import diag_coeff
from .quad import DEFAULT_SPEC, QuadSpec, SingularityHint
from .specfun import legendre, legendre_kernel_moment, require_odd

__all__ = [
    "phi0",
    "phi_lambda",
    "phi_lambda_terms",
    "potential_norm",
    "h_minus_half_norm",
    "McEstimate",
    "mc_potential_norm",
    "SchurConstants",
    "schur_constants",
    "LowerConstant",
    "lower_constant",
    "upper_constant",
    "lambda1",
    "BoundReport",
    "e0_bound",
    "xi_minus_norm_sq",
]


# ---------------------------------------------------------------------------
# sector quadratic forms


def _check_form_charge(charge: SectorCharge, weight_power: int) -> None:
    """Tail/head admissibility for a radial weight k^weight_power."""
    tail = profile_tail_exponent(charge.profile)
    head = profile_head_exponent(charge.profile)
    _, hi = profile_support(charge.profile)
    if math.isinf(hi) and weight_power + 2.0 * tail >= -1.0:
        raise DomainError(
            f"diagonal term diverges at large k: profile tail exponent "
            f"{tail!r} is too slow for the k^{weight_power} weight"
        )
    lo, _ = profile_support(charge.profile)
    if lo == 0.0 and weight_power + 2.0 * head <= -1.0:
        raise DomainError(
            f"diagonal term diverges at k -> 0: head exponent {head!r} "
            f"is too steep for the k^{weight_power} weight"
        )


def _profile_hints(charge: SectorCharge) -> tuple[SingularityHint, ...]:
    return tuple(SingularityHint(b, 0.0) for b in profile_breakpoints(charge.profile))


def _radial_moment(charge: SectorCharge, weight, spec: QuadSpec,
                   lo: float = 0.0) -> float:
    """int_lo^inf weight(k) |profile(k)|^2 dk with support-aware limits."""
    s_lo, s_hi = profile_support(charge.profile)
    a = max(lo, s_lo)

    def f(k: np.ndarray) -> np.ndarray:
        vals = profile_values(charge.profile, k)
        return weight(k) * (vals.real**2 + vals.imag**2)

    hints = tuple(h for h in _profile_hints(charge) if h.point > a)
    wspec = QuadSpec(rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
                     max_subdivisions=spec.max_subdivisions,
                     singularity_hints=hints)
    if math.isinf(s_hi):
        return quad.integrate_semi_infinite(f, a, wspec).require()
    return quad.integrate_finite(f, a, s_hi, wspec).require()


def _cross_term(m: float, charge: SectorCharge, spec: QuadSpec,
                lam: float = 0.0, power: int = 1, eps: float = 0.0,
                weight_cross=None) -> float:
    """Double radial integral of the Legendre-weighted kernel moment.

    Computes  int int k1^2 k2^2 Re[xi*(k1) xi(k2)] W(k1,k2) dk1 dk2 with
    W = legendre_kernel_moment(ell, k1^2+k2^2+lam, 2 k1 k2/(m+1), power),
    optionally with an extra symmetric weight(k1, k2) factor.
    """
    ell = charge.ell
    profile = charge.profile
    s_lo, s_hi = profile_support(profile)
    a = max(eps, s_lo)
    inner_spec = spec.tightened(1e-2)
    hints = tuple(h for h in _profile_hints(charge) if h.point > a)
    ispec = QuadSpec(rel_tol=inner_spec.rel_tol, abs_tol=inner_spec.abs_tol,
                     max_subdivisions=inner_spec.max_subdivisions,
                     singularity_hints=hints)
    ospec = QuadSpec(rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
                     max_subdivisions=spec.max_subdivisions,
                     singularity_hints=hints)
    is_complex = bool(np.any(np.abs(np.atleast_1d(
        profile_values(profile, np.array([max(a, 1e-3), 1.0]))).imag) > 0))

    def inner(k1: float, part: str, scale: float) -> float:
        # the outer weight multiplies inside so the inner tolerance
        # applies to the contribution that is actually summed
        def f(k2: np.ndarray) -> np.ndarray:
            vals = profile_values(profile, k2)
            comp = vals.real if part == "re" else vals.imag
            w = legendre_kernel_moment(
                ell, k1 * k1 + k2 * k2 + lam, 2.0 * k1 * k2 / (m + 1.0), power)
            if weight_cross is not None:
                w = w * weight_cross(k1, k2)
            return scale * k2 * k2 * comp * w

        if scale == 0.0:
            return 0.0
        if math.isinf(s_hi):
            return quad.integrate_semi_infinite(f, a, ispec).require()
        return quad.integrate_finite(f, a, s_hi, ispec).require()

    def outer(k1: np.ndarray) -> np.ndarray:
        vals = profile_values(profile, k1)
        out = np.empty(len(k1))
        for i, k in enumerate(k1):
            acc = inner(float(k), "re", float(k * k * vals.real[i]))
            if is_complex:
                acc += inner(float(k), "im", float(k * k * vals.imag[i]))
            out[i] = acc
        return out

    if math.isinf(s_hi):
        return quad.integrate_semi_infinite(outer, a, ospec).require()
    return quad.integrate_finite(outer, a, s_hi, ospec).require()


def phi0(m: float, charge: SectorCharge, spec: QuadSpec = DEFAULT_SPEC) -> float:
    """Sector-reduced homogeneous quadratic form.

    Diagonal term diag_coeff(m) * int k^3 |xi|^2 plus the P_ell-weighted
    cross term; positive on the ell = 1 sector for every mass ratio above
    the lower critical one.
    """
    check_mass(m)
    require_odd(charge.ell)
    _check_form_charge(charge, 3)
    diag = diag_coeff(m) * _radial_moment(charge, lambda k: k**3, spec)
    cross = 2.0 * math.pi * _cross_term(m, charge, spec, lam=0.0, power=1)
    return diag + cross


def phi_lambda_terms(m: float, lam: float, charge: SectorCharge,
                     spec: QuadSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """(diagonal, cross) pieces of the shifted form; their sum is phi_lambda."""
    check_mass(m)
    require_odd(charge.ell)
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam!r}")
    _check_form_charge(charge, 3)
    diag = diag_coeff(m) * _radial_moment(
        charge, lambda k: k * k * np.sqrt(k * k + lam), spec)
    cross = 2.0 * math.pi * _cross_term(m, charge, spec, lam=lam, power=1)
    return diag, cross


def phi_lambda(m: float, lam: float, charge: SectorCharge,
               spec: QuadSpec = DEFAULT_SPEC) -> float:
    """Shifted sector form: weight sqrt(k^2+lam), kernel shifted by +lam.

    Reduces to phi0 at lam = 0 (by a distinct code path; the diagonal
    weight here is k^2 sqrt(k^2+lam), there k^3).
    """
    diag, cross = phi_lambda_terms(m, lam, charge, spec)
    return diag + cross


# ---------------------------------------------------------------------------
# potential norm and its Monte-Carlo oracle


def potential_norm(m: float, lam: float, eps: float, charge: SectorCharge,
                   spec: QuadSpec = DEFAULT_SPEC) -> float:
    """Squared L2 norm of the potential generated by the charge, reduced.

    For a charge xi~(k) Y_ell^n the 6-D integral of
    |xi(k1) - xi(k2)|^2 / (k1^2 + k2^2 + 2 k1.k2/(m+1) + lam)^2 over
    {k1, k2 >= eps} collapses (spherical addition theorem) to a diagonal
    part with angular weight 1 and a cross part with weight P_ell(t):

        2 pi * int int k1^2 k2^2 [ (|xi(k1)|^2 + |xi(k2)|^2) W0
                                    - 2 Re xi*(k1) xi(k2) W_ell ],

    with W0, W_ell the weight-1 and P_ell moments of 1/(...)^2.
    """
    check_mass(m)
    if lam < 0 or eps < 0:
        raise DomainError("lambda and eps must be >= 0")
    if lam == 0.0 and eps == 0.0:
        head = profile_head_exponent(charge.profile)
        lo, _ = profile_support(charge.profile)
        if lo == 0.0 and head <= 0.5:
            raise DomainError(
                "infrared-divergent configuration: lam = 0 and eps = 0 "
                f"need a charge vanishing at 0 faster than k^0.5, "
                f"got head exponent {head!r}"
            )
    ell = charge.ell
    profile = charge.profile
    s_lo, s_hi = profile_support(profile)
    inner_spec = spec.tightened(1e-2)
    # both integrals run over (eps, inf): the |xi(k2)|^2 diagonal piece
    # survives outside the profile support, so every support edge and
    # breakpoint above eps is a kink of the integrand
    points = set(profile_breakpoints(profile)) | {s_lo}
    if math.isfinite(s_hi):
        points.add(s_hi)
    hints = tuple(SingularityHint(p, 0.0) for p in sorted(points) if p > eps)

    def inner(k1: float, v1_sq: float, v1: complex) -> float:
        # k1^2 multiplies inside so the inner tolerance applies to the
        # contribution that is actually summed by the outer quadrature
        k1_sq = k1 * k1

        def f(k2: np.ndarray) -> np.ndarray:
            vals = profile_values(profile, k2)
            v2_sq = vals.real**2 + vals.imag**2
            A = k1_sq + k2 * k2 + lam
            B = 2.0 * k1 * k2 / (m + 1.0)
            w0 = 2.0 / (A * A - B * B)
            wl = legendre_kernel_moment(ell, A, B, 2)
            cross = (v1.real * vals.real + v1.imag * vals.imag) * wl
            return k1_sq * k2 * k2 * ((v1_sq + v2_sq) * w0 - 2.0 * cross)

        ispec = QuadSpec(rel_tol=inner_spec.rel_tol, abs_tol=inner_spec.abs_tol,
                         max_subdivisions=inner_spec.max_subdivisions,
                         singularity_hints=hints)
        return quad.integrate_semi_infinite(f, eps, ispec).require()

    def outer(k1: np.ndarray) -> np.ndarray:
        vals = profile_values(profile, k1)
        out = np.empty(len(k1))
        for i, k in enumerate(k1):
            v1 = complex(vals[i])
            out[i] = inner(float(k), abs(v1) ** 2, v1)
        return out

    ospec = QuadSpec(rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
                     max_subdivisions=spec.max_subdivisions,
                     singularity_hints=hints)
    body = quad.integrate_semi_infinite(outer, eps, ospec).require()
    return 2.0 * math.pi * body


def h_minus_half_norm(charge: SectorCharge, lam: float, eps: float = 0.0,
                      spec: QuadSpec = DEFAULT_SPEC) -> float:
    """Sobolev -1/2 norm (lam-weighted): int_{k>=eps} k^2 |xi|^2/sqrt(k^2+lam)."""
    if lam < 0 or eps < 0:
        raise DomainError("lambda and eps must be >= 0")
    if lam == 0.0 and eps == 0.0:
        head = profile_head_exponent(charge.profile)
        lo, _ = profile_support(charge.profile)
        if lo == 0.0 and head <= -0.5:
            raise DomainError(
                "infrared-divergent norm: lam = 0, eps = 0 and head "
                f"exponent {head!r}"
            )
    return _radial_moment(charge, lambda k: k * k / np.sqrt(k * k + lam),
                          spec, lo=eps)


@dataclass(frozen=True)
class McEstimate:
    value: float
    stderr: float
    n_samples: int
    seed: int


_MC_CHUNK = 1 << 19


def mc_potential_norm(m: float, lam: float, charge: SectorCharge,
                      n_samples: int = 10_000_000, seed: int = 20260810,
                      ) -> McEstimate:
    """Seeded 6-D Monte-Carlo estimate of the potential norm.

    Importance sampling with the product density
    p(k1, k2) = prod_i sqrt(lam)/pi^2 / (k_i^2 + lam)^2; radial inversion
    through the angle variable (density sin^2) is done by bisection, so
    the stream is reproducible bit for bit.  Samples are drawn in fixed
    chunks on counter-keyed streams: the reduction is deterministic and
    independent of any worker partitioning along chunk boundaries.
    """
    check_mass(m)
    if lam <= 0:
        raise DomainError("the Monte-Carlo oracle requires lam > 0")
    ell = charge.ell
    y_norm = math.sqrt((2 * ell + 1) / (4.0 * math.pi))
    sqrt_lam = math.sqrt(lam)
    total_w = 0.0
    total_w2 = 0.0
    done = 0
    chunk_idx = 0
    while done < n_samples:
        n = min(_MC_CHUNK, n_samples - done)
        rng = np.random.Generator(
            np.random.Philox(key=np.array([seed, chunk_idx], dtype=np.uint64)))
        u = rng.random((6, n))
        k1 = sqrt_lam * np.tan(_phi_from_uniform(u[0]))
        k2 = sqrt_lam * np.tan(_phi_from_uniform(u[1]))
        z1 = 2.0 * u[2] - 1.0
        z2 = 2.0 * u[3] - 1.0
        dphi = 2.0 * math.pi * (u[4] - u[5])
        cos_t = z1 * z2 + np.sqrt((1 - z1 * z1) * (1 - z2 * z2)) * np.cos(dphi)
        v1 = profile_values(charge.profile, k1) * y_norm * legendre(ell, z1)
        v2 = profile_values(charge.profile, k2) * y_norm * legendre(ell, z2)
        d = k1 * k1 + k2 * k2 + 2.0 * k1 * k2 * cos_t / (m + 1.0) + lam
        f = np.abs(v1 - v2) ** 2 / d**2
        p = (sqrt_lam / math.pi**2) ** 2 / ((k1 * k1 + lam) ** 2 * (k2 * k2 + lam) ** 2)
        w = f / p
        total_w += float(np.sum(w))
        total_w2 += float(np.sum(w * w))
        done += n
        chunk_idx += 1
    mean = total_w / n_samples
    var = max(total_w2 / n_samples - mean * mean, 0.0)
    stderr = math.sqrt(var / n_samples)
    return McEstimate(mean, stderr, n_samples, seed)


_PHI_TABLE = np.linspace(0.0, 0.5 * math.pi, 8193)
_CDF_TABLE = 2.0 * (_PHI_TABLE - np.sin(_PHI_TABLE) * np.cos(_PHI_TABLE)) / math.pi


def _phi_from_uniform(u: np.ndarray) -> np.ndarray:
    """Invert the radial-angle CDF 2(phi - sin phi cos phi)/pi = u.

    Table lookup plus three Newton polishes; the residual map error is at
    machine level, so the nominal sampling density is exact for weighting
    purposes.
    """
    phi = np.interp(u, _CDF_TABLE, _PHI_TABLE)
    for _ in range(3):
        g = 2.0 * (phi - np.sin(phi) * np.cos(phi)) / math.pi - u
        dg = 4.0 * np.sin(phi) ** 2 / math.pi
        phi = np.clip(phi - g / np.maximum(dg, 1e-30), 0.0, 0.5 * math.pi)
    return phi


# ---------------------------------------------------------------------------
# Schur constants and coercivity


@dataclass(frozen=True)
class SchurConstants:
    """Row/column bounds of the off-diagonal kernel at cut parameter a."""

    a: float
    c0: float
    c1s: float
    c2s: float
    c1t: float
    c2t: float


def schur_constants(m: float, a: float,
                    spec: QuadSpec = DEFAULT_SPEC) -> SchurConstants:
    """The five one-dimensional Schur-test integrals at cut a > 1.

    Tail integrals over (a, inf) are mapped by q -> 1/q onto (0, 1/a),
    which leaves at worst a 1/sqrt(u) endpoint (handled exactly by the
    engine's substitution route).
    """
    check_mass(m)
    if not a > 1.0:
        raise DomainError(f"Schur cut must satisfy a > 1, got {a!r}")
    c = 2.0 / (m + 1.0)
    four_pi = 4.0 * math.pi
    top = 1.0 / a
    half_hint = QuadSpec(rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
                         max_subdivisions=spec.max_subdivisions,
                         singularity_hints=(SingularityHint(0.0, -0.5),))

    def minus(u: np.ndarray) -> np.ndarray:
        return 1.0 + u * u - c * u

    def plus(u: np.ndarray) -> np.ndarray:
        return 1.0 + u * u + c * u

    c0 = four_pi * quad.integrate_finite(
        lambda u: 1.0 / plus(u) ** 2, 0.0, top, spec).require()
    c1s = four_pi * quad.integrate_finite(
        lambda u: u**-0.5 / minus(u) ** 2, 0.0, top, half_hint).require()
    c2s = four_pi * quad.integrate_finite(
        lambda u: u**2.5 / minus(u) ** 2, 0.0, top, spec).require()
    c1t = four_pi * quad.integrate_finite(
        lambda u: u**-0.5 * (1.0 + u * u) ** 0.25 / minus(u) ** 2,
        0.0, top, half_hint).require()
    c2t = four_pi * quad.integrate_finite(
        lambda u: u * u * (1.0 + u * u) ** 0.25 / minus(u) ** 2,
        0.0, top, spec).require()
    return SchurConstants(a, c0, c1s, c2s, c1t, c2t)


@dataclass(frozen=True)
class LowerConstant:
    c1_lower: float
    a_star: float


def lower_constant(m: float, spec: QuadSpec = DEFAULT_SPEC) -> LowerConstant:
    """sup over a > 1 of c0(a) - 2 sqrt(c1s(a) c2s(a)), with its maximizer.

    Golden-section search in log a after a coarse bracketing scan; the
    supremum must come out positive (it is the coercivity constant of the
    potential-to-charge norm equivalence).
    """
    check_mass(m)

    def objective(log_a: float) -> float:
        sc = schur_constants(m, math.exp(log_a), spec)
        return sc.c0 - 2.0 * math.sqrt(sc.c1s * sc.c2s)

    lo, hi = math.log(1.2), math.log(1e4)
    grid = np.linspace(lo, hi, 25)
    vals = [objective(x) for x in grid]
    k = int(np.argmax(vals))
    left = grid[max(k - 1, 0)]
    right = grid[min(k + 1, len(grid) - 1)]
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = right - inv_phi * (right - left)
    x2 = left + inv_phi * (right - left)
    f1, f2 = objective(x1), objective(x2)
    for _ in range(60):
        if right - left < 1e-10:
            break
        if f1 < f2:
            left, x1, f1 = x1, x2, f2
            x2 = left + inv_phi * (right - left)
            f2 = objective(x2)
        else:
            right, x2, f2 = x2, x1, f1
            x1 = right - inv_phi * (right - left)
            f1 = objective(x1)
    a_star = math.exp(0.5 * (left + right))
    best = objective(math.log(a_star))
    if not best > 0.0:
        raise NonConvergedError(
            f"coercivity constant came out non-positive ({best!r}) at "
            f"m={m!r}; this contradicts the norm equivalence"
        )
    return LowerConstant(best, a_star)


def upper_constant(m: float, spec: QuadSpec = DEFAULT_SPEC) -> float:
    """Worst-direction upper constant 16 pi int_0^inf q^2/(1+q^2-2q/(m+1))^2."""
    check_mass(m)
    c = 2.0 / (m + 1.0)

    def minus(u: np.ndarray) -> np.ndarray:
        return 1.0 + u * u - c * u

    body = quad.integrate_finite(lambda q: q * q / minus(q) ** 2,
                                 0.0, 1.0, spec).require()
    tail = quad.integrate_finite(lambda u: 1.0 / minus(u) ** 2,
                                 0.0, 1.0, spec).require()
    return 16.0 * math.pi * (body + tail)


def lambda1(m: float, spec: QuadSpec = DEFAULT_SPEC) -> float:
    """Surrogate spectral constant -F_offdiag(1; m, 0) / F_diag(m).

    Built from the resonance function alone; equals 1 exactly at the
    lower critical mass and decreases strictly above it, which are the
    two properties the coercivity constant D2 consumes.
    """
    check_mass(m)
    return -f_offdiag(1, m, 0.0, FRep.DIRECT_INTEGRAL, spec) / f_diag(m)


# ---------------------------------------------------------------------------
# explicit lower bound for the extension family


@dataclass(frozen=True)
class BoundReport:
    """Everything that enters the explicit lower bound, plus the bound."""

    m: float
    s: float
    d1: float
    d2: float
    lambda1_surrogate: float
    c1_lower: float
    c2_upper: float
    a_star: float
    beta: tuple[float, float, float]
    e0: float


def e0_bound(m: float, params: ExtensionParams,
             spec: QuadSpec = DEFAULT_SPEC) -> BoundReport:
    """Explicit lower bound of the extension labeled by beta.

    Zero when every finite beta entry is nonnegative (the form is then
    positive); otherwise

        e0 = -[ 2 (1-s) (D1 c1 + D2 (D1+1)) / (D1 D2 c1) * max|beta| ]^(1/s)

    with D1 = m/(m+1), D2 = 4 pi^2 sqrt(m(m+2))/(m+1) (1 - lambda1(m))
    and c1 the coercivity constant.  The bound collapses to 0 as the mass
    ratio approaches the upper critical value and blows up to -inf at the
    lower one.
    """
    s = s_of_m(m, spec).value
    lam1 = lambda1(m, spec)
    d1 = m / (m + 1.0)
    d2 = 4.0 * math.pi**2 * math.sqrt(m * (m + 2.0)) / (m + 1.0) * (1.0 - lam1)
    lc = lower_constant(m, spec)
    c2u = upper_constant(m, spec)
    finite = params.finite_entries
    if not finite or params.all_nonnegative:
        e0 = 0.0
    else:
        max_beta = max(abs(b) for b in finite)
        if s <= 0.0 or d2 <= 0.0:
            raise DomainError(
                f"bound undefined at m={m!r}: s={s!r}, d2={d2!r}"
            )
        bracket = (2.0 * (1.0 - s) * (d1 * lc.c1_lower + d2 * (d1 + 1.0))
                   / (d1 * d2 * lc.c1_lower) * max_beta)
        e0 = -(bracket ** (1.0 / s))
    return BoundReport(m=m, s=s, d1=d1, d2=d2, lambda1_surrogate=lam1,
                       c1_lower=lc.c1_lower, c2_upper=c2u, a_star=lc.a_star,
                       beta=tuple(params.beta), e0=e0)


def xi_minus_norm_sq(lam: float, s: float,
                     spec: QuadSpec = DEFAULT_SPEC) -> float:
    """High-frequency weight of the resonance charge:
    int_{sqrt(lam)}^inf k^(-3+2s) dk, equal to lam^(s-1)/(2(1-s))."""
    if lam <= 0:
        raise DomainError(f"lam must be > 0, got {lam!r}")
    if not 0.0 <= s < 1.0:
        raise DomainError(f"s must lie in [0, 1), got {s!r}")
    gamma = -3.0 + 2.0 * s
    tspec = QuadSpec(rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
                     max_subdivisions=spec.max_subdivisions,
                     singularity_hints=(SingularityHint(math.inf, gamma),))
    return quad.integrate_semi_infinite(lambda k: k**gamma,
                                        math.sqrt(lam), tspec).require()
