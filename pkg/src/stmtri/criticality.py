"""Root-solving layer: the resonance exponent s(m), its inverse m(s), and
the critical mass ratios of each odd angular sector.

Monotonicity of the resonance function (increasing in m, decreasing in s)
makes plain bisection certifiable, so that is what is used: a geometric
bracket scan followed by bisection to interval width 1e-12.  Every root
comes back with the residual |F| at the root as a certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import BracketError, DomainError, RegimeError
from .ffunc import FRep, check_mass, f_total
from .quad import DEFAULT_SPEC, QuadSpec
from .specfun import require_odd

__all__ = ["RootResult", "CriticalPair", "m_of_s", "s_of_m", "critical_pair"]

BISECT_WIDTH = 1e-12
ENDPOINT_SNAP = 1e-11


@dataclass(frozen=True)
class RootResult:
    """A certified root: the value and the residual |F| at the root."""

    value: float
    residual: float


@dataclass(frozen=True)
class CriticalPair:
    """Window edges of one odd sector: m_star = m(0), m_star_star = m(1)."""

    ell: int
    m_star: float
    m_star_star: float
    residual_star: float
    residual_star_star: float


def _root_spec(spec: QuadSpec) -> QuadSpec:
    # residual certificates promise |F| <= 1e-10 at the root, so F is
    # evaluated with pinned absolute accuracy well below that; a relative
    # target would chase noise on sectors where the integral is small by
    # cancellation
    return QuadSpec(
        rel_tol=min(spec.rel_tol, 1e-12),
        abs_tol=1e-13,
        max_subdivisions=max(spec.max_subdivisions, 2000),
    )


def _bisect(fn, lo: float, hi: float, f_lo: float, width: float) -> RootResult:
    """Bisection on a sign change; assumes fn(lo) = f_lo and sign change."""
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = fn(mid)
        if f_mid == 0.0:
            return RootResult(mid, 0.0)
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    return RootResult(root, abs(fn(root)))


def m_of_s(ell: int, s: float, spec: QuadSpec = DEFAULT_SPEC) -> RootResult:
    """The unique mass ratio m with F_ell(m, s) = 0.

    Existence and uniqueness follow from strict monotonicity in m together
    with the endpoint signs (negative as m -> 0, positive for large m).
    """
    require_odd(ell)
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s must lie in [0, 1], got {s!r}")
    rep = FRep.DIRECT_INTEGRAL if s < 1.0 else FRep.ANTISYMMETRIZED
    eval_spec = _root_spec(spec)

    def fn(m: float) -> float:
        return f_total(ell, m, s, rep, eval_spec)

    lo, hi = 1e-4, 1.0
    f_lo, f_hi = fn(lo), fn(hi)
    while f_lo > 0.0 and lo > 1e-6:
        lo *= 0.1
        f_lo = fn(lo)
    while f_hi < 0.0 and hi < 1e3:
        hi *= 10.0
        f_hi = fn(hi)
    if not (f_lo < 0.0 < f_hi):
        raise BracketError(
            f"no sign change of F_{ell}(., s={s!r}) on m in (1e-6, 1e3): "
            f"F({lo!r})={f_lo!r}, F({hi!r})={f_hi!r}"
        )
    return _bisect(fn, lo, hi, f_lo, BISECT_WIDTH)


@lru_cache(maxsize=64)
def _critical_pair_cached(ell: int, spec: QuadSpec) -> CriticalPair:
    star = m_of_s(ell, 0.0, spec)
    star_star = m_of_s(ell, 1.0, spec)
    return CriticalPair(ell, star.value, star_star.value,
                        star.residual, star_star.residual)


def critical_pair(ell: int, spec: QuadSpec = DEFAULT_SPEC) -> CriticalPair:
    """Both window edges of sector ell (cached; the pair is reused a lot)."""
    require_odd(ell)
    return _critical_pair_cached(ell, spec)


def s_of_m(m: float, spec: QuadSpec = DEFAULT_SPEC) -> RootResult:
    """Resonance exponent: the unique s in (0, 1) with F_1(m, s) = 0.

    Defined on the window (m*, m**) of the ell = 1 sector; masses within
    ENDPOINT_SNAP of an edge return exactly 0 or 1 so that sweeps touching
    the edges do not trip spurious regime errors.
    """
    check_mass(m)
    pair = critical_pair(1, spec)
    if abs(m - pair.m_star) <= ENDPOINT_SNAP:
        return RootResult(0.0, abs(f_total(1, pair.m_star, 0.0,
                                           FRep.DIRECT_INTEGRAL, _root_spec(spec))))
    if abs(m - pair.m_star_star) <= ENDPOINT_SNAP:
        return RootResult(1.0, abs(f_total(1, pair.m_star_star, 1.0,
                                           FRep.ANTISYMMETRIZED, _root_spec(spec))))
    if m < pair.m_star:
        raise RegimeError(m, "m*", pair.m_star)
    if m > pair.m_star_star:
        raise RegimeError(m, "m**", pair.m_star_star)
    eval_spec = _root_spec(spec)

    def fn(s: float) -> float:
        return f_total(1, m, s, FRep.DIRECT_INTEGRAL, eval_spec)

    # F_1(m, 0) > 0 > F_1(m, 1) inside the window; bisection never needs
    # to evaluate the s = 1 endpoint itself
    return _bisect(fn, 0.0, 1.0, fn(0.0), BISECT_WIDTH)
