"""Special-function kernel: Legendre polynomials, closed-form moment
integrals, and the closed-form inner radial integral shared by the
resonance function and the boundary-condition operator.

Also provides the Legendre-weighted angular moments of the Cauchy-type
kernels 1/(A+Bt) and 1/(A+Bt)^2 that every sector-reduced integral in the
package rests on.  Those are evaluated by an exact recurrence when B/A is
order one and by an absolutely convergent moment series when B/A is small,
where the recurrence would cancel catastrophically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import DomainError

__all__ = [
    "SectorIndex",
    "legendre",
    "odd_moment",
    "beta_half",
    "inner_radial",
    "legendre_kernel_moment",
]


@dataclass(frozen=True)
class SectorIndex:
    """Angular sector (ell, n).  The azimuthal label n is metadata only:
    every reduced formula depends on ell alone."""

    ell: int
    n: int = 0

    def __post_init__(self):
        if self.ell < 0:
            raise DomainError(f"ell must be >= 0, got {self.ell}")
        if abs(self.n) > self.ell:
            raise DomainError(f"need |n| <= ell, got n={self.n}, ell={self.ell}")

    @property
    def is_odd(self) -> bool:
        return self.ell % 2 == 1


def require_odd(ell: int) -> int:
    """Only odd sectors are antisymmetry-compatible; reject the rest."""
    if ell < 0 or ell % 2 == 0:
        raise DomainError(
            f"ell={ell}: even angular momentum admits no resonance "
            "(the off-diagonal term is positive there)"
        )
    return ell


def legendre(ell: int, t):
    """P_ell(t) by the three-term recurrence; accepts scalars or arrays."""
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    t_arr = np.asarray(t, dtype=float)
    if np.any(np.abs(t_arr) > 1.0):
        raise DomainError("legendre argument must satisfy |t| <= 1")
    p_prev = np.ones_like(t_arr)
    if ell == 0:
        return p_prev if t_arr.shape else float(p_prev)
    p = t_arr.copy()
    for k in range(1, ell):
        p_prev, p = p, ((2 * k + 1) * t_arr * p - k * p_prev) / (k + 1)
    return p if t_arr.shape else float(p)


def _legendre_coeffs(ell: int) -> np.ndarray:
    """Monomial coefficients of P_ell, lowest power first."""
    c_prev = np.array([1.0])
    if ell == 0:
        return c_prev
    c = np.array([0.0, 1.0])
    for k in range(1, ell):
        shifted = np.concatenate([[0.0], c])
        prev = np.concatenate([c_prev, [0.0, 0.0]])
        c_prev, c = c, ((2 * k + 1) * shifted - k * prev) / (k + 1)
    return c


def beta_half(j: int, ell: int) -> float:
    """Exact value of the even moment integral of (1-t^2)^ell.

    beta_half(j, ell) = int_{-1}^{1} t^{2j} (1-t^2)^ell dt
                      = B(j + 1/2, ell + 1),
    evaluated through log-Gamma so large j stays stable.
    """
    if j < 0 or ell < 0:
        raise DomainError(f"need j, ell >= 0, got j={j}, ell={ell}")
    return float(np.exp(gammaln(j + 0.5) + gammaln(ell + 1.0)
                        - gammaln(j + ell + 1.5)))


def odd_moment(ell: int, n: int) -> float:
    """Exact odd moment int_{-1}^{1} t^{2n+1} P_ell(t) dt for odd ell.

    Vanishes when 2n+1 < ell; otherwise equals
    2^{-ell} C(2n+1, ell) * beta_half((2n+1-ell)/2, ell).
    """
    require_odd(ell)
    if n < 0:
        raise DomainError(f"need n >= 0, got {n}")
    power = 2 * n + 1
    if power < ell:
        return 0.0
    j = (power - ell) // 2
    return math.comb(power, ell) * beta_half(j, ell) / 2.0**ell


def _power_moment(ell: int, j: int) -> float:
    """int_{-1}^{1} t^j P_ell(t) dt for j >= ell with j = ell (mod 2)."""
    k = (j - ell) // 2
    return math.comb(j, ell) * beta_half(k, ell) / 2.0**ell


def inner_radial(b, s: float):
    """Closed form of int_0^inf p^s / (p^2 + 2 b p + 1) dp for |b| < 1.

    Equals pi*sin(s*theta)/(sin(pi*s)*sin(theta)) with theta = arccos(b);
    the s -> 0 limit theta/sin(theta) is taken analytically.  Diverges at
    s = 1 (only antisymmetrized combinations stay finite there).
    """
    b_arr = np.asarray(b, dtype=float)
    scalar = not b_arr.shape
    if np.any(np.abs(b_arr) >= 1.0):
        raise DomainError("inner_radial requires |b| < 1")
    if not 0.0 <= s < 1.0:
        raise DomainError(f"inner_radial requires 0 <= s < 1, got s={s}")
    theta = np.arccos(b_arr)
    if s == 0.0:
        out = theta / np.sin(theta)
    else:
        out = math.pi * np.sin(s * theta) / (math.sin(math.pi * s) * np.sin(theta))
    return float(out) if scalar else out


@lru_cache(maxsize=32)
def _moment_table(ell: int, terms: int) -> np.ndarray:
    return np.array([_power_moment(ell, ell + 2 * k) for k in range(terms)])


_SERIES_CUT = 0.6
_SERIES_TERMS = 96


def legendre_kernel_moment(ell: int, A, B, power: int = 1):
    """int_{-1}^{1} P_ell(t) / (A + B t)^power dt, power in {1, 2}.

    Requires A > |B| >= 0.  Vectorized over (A, B).  For odd ell the value
    is strictly negative (the kernel weights t < 0 more); the small-B/A
    branch sums the moment series, the rest uses the downward-in-degree
    exact recurrence built on the logarithm.
    """
    if power not in (1, 2):
        raise DomainError(f"power must be 1 or 2, got {power}")
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    A_arr, B_arr = np.broadcast_arrays(np.asarray(A, float), np.asarray(B, float))
    scalar = not A_arr.shape
    A_arr = np.atleast_1d(A_arr).astype(float)
    B_arr = np.atleast_1d(B_arr).astype(float)
    if np.any(A_arr <= np.abs(B_arr)):
        raise DomainError("legendre_kernel_moment requires A > |B|")
    out = np.empty_like(A_arr)
    x = np.abs(B_arr) / A_arr
    small = x < _SERIES_CUT
    if np.any(small):
        out[small] = _moment_series(ell, A_arr[small], B_arr[small], power)
    big = ~small
    if np.any(big):
        out[big] = _moment_recurrence(ell, A_arr[big], B_arr[big], power)
    if scalar:
        return float(out[0])
    return out


def _moment_series(ell: int, A: np.ndarray, B: np.ndarray, power: int) -> np.ndarray:
    moments = _moment_table(ell, _SERIES_TERMS)
    x = B / A
    acc = np.zeros_like(A)
    xj = x**ell
    for k in range(_SERIES_TERMS):
        j = ell + 2 * k
        coeff = moments[k] if power == 1 else (j + 1) * moments[k]
        term = coeff * xj
        acc += term
        if np.all(np.abs(term) <= 1e-18 * np.maximum(np.abs(acc), 1e-300)):
            break
        xj *= x * x
    sign = (-1.0) ** ell
    scale = A if power == 1 else A * A
    return sign * acc / scale


def _moment_recurrence(ell: int, A: np.ndarray, B: np.ndarray, power: int) -> np.ndarray:
    # I_n = int t^n/(A+Bt) dt, W_n = int t^n/(A+Bt)^2 dt on [-1, 1]
    log_ratio = np.log((A + B) / (A - B))
    i_prev = log_ratio / B
    out_i = np.zeros_like(A)
    coeffs = _legendre_coeffs(ell)
    if coeffs[0]:
        out_i += coeffs[0] * i_prev
    i_vals = [i_prev]
    for n in range(1, ell + 1):
        j_even = 2.0 / n if (n - 1) % 2 == 0 else 0.0
        i_n = (j_even - A * i_vals[-1]) / B
        i_vals.append(i_n)
        if n < len(coeffs) and coeffs[n]:
            out_i += coeffs[n] * i_n
    if power == 1:
        return out_i
    w_prev = 2.0 / (A * A - B * B)
    out_w = coeffs[0] * w_prev if coeffs[0] else np.zeros_like(A)
    for n in range(1, ell + 1):
        w_n = (i_vals[n - 1] - A * w_prev) / B
        w_prev = w_n
        if n < len(coeffs) and coeffs[n]:
            out_w += coeffs[n] * w_n
    return out_w
