"""Radial charge profiles living on a coincidence plane, and the labels of
the self-adjoint extension family.

A charge is a radial profile xi~(k) in one angular sector.  Profiles come
in four flavors: pure power laws (optionally truncated to one side of a
radius R), gaussian-type analytic profiles, and log-grid sample tables
with declared head/tail exponents.  A profile knows how to evaluate
itself on an array of momenta and reports its support, interior
breakpoints and asymptotic exponents so quadrature can be set up around
it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError
from .specfun import SectorIndex

__all__ = [
    "PowerLawCharge",
    "GaussianTimesK",
    "GaussianBump",
    "RadialGridCharge",
    "SectorCharge",
    "ExtensionParams",
    "profile_values",
    "profile_support",
    "profile_breakpoints",
    "profile_head_exponent",
    "profile_tail_exponent",
]


@dataclass(frozen=True)
class PowerLawCharge:
    """amplitude * k^{-exponent}, optionally supported on one side of R.

    truncation:
      None    -- the pure power law on (0, inf)
      "above" -- kept only for k >= R (zero below)
      "below" -- kept only for k <  R (zero above)
    """

    amplitude: complex = 1.0
    exponent: float = 2.0
    truncation: str | None = None
    radius: float = 1.0

    def __post_init__(self):
        if self.exponent <= 0:
            raise DomainError(f"power-law exponent must be > 0, got {self.exponent}")
        if self.truncation not in (None, "above", "below"):
            raise DomainError(f"unknown truncation {self.truncation!r}")
        if self.truncation is not None and not self.radius > 0:
            raise DomainError("truncation radius must be > 0")


@dataclass(frozen=True)
class GaussianTimesK:
    """amplitude * k * exp(-(k/scale)^2); smooth, decays at both ends."""

    amplitude: complex = 1.0
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise DomainError("gaussian scale must be > 0")


@dataclass(frozen=True)
class GaussianBump:
    """amplitude * exp(-((k-center)/width)^2); a smooth localized bump."""

    amplitude: complex = 1.0
    center: float = 1.0
    width: float = 0.5

    def __post_init__(self):
        if not self.width > 0:
            raise DomainError("bump width must be > 0")


@dataclass(frozen=True)
class RadialGridCharge:
    """Samples xi~(k_i) on a strictly increasing log grid, extended past
    the grid by the declared power-law exponents.

    head_exponent: xi~(k) ~ xi~(k_min) (k/k_min)^{head} as k -> 0
    tail_exponent: xi~(k) ~ xi~(k_max) (k/k_max)^{tail} as k -> inf
    Interpolation between nodes is monotone cubic in log k (separately on
    real and imaginary parts), which cannot overshoot the sampled decay.
    """

    nodes: tuple[float, ...]
    values: tuple[complex, ...]
    head_exponent: float = 0.0
    tail_exponent: float = -4.0

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 4:
            raise DomainError("grid charge needs at least 4 nodes")
        if np.any(nodes <= 0) or np.any(np.diff(nodes) <= 0):
            raise DomainError("grid nodes must be positive and strictly increasing")
        if len(self.values) != nodes.size:
            raise DomainError("values and nodes must have equal length")

    def _interpolators(self):
        logk = np.log(np.asarray(self.nodes, dtype=float))
        vals = np.asarray(self.values, dtype=complex)
        re = PchipInterpolator(logk, vals.real, extrapolate=False)
        im = PchipInterpolator(logk, vals.imag, extrapolate=False)
        return re, im

    @classmethod
    def from_function(cls, fn, k_min: float, k_max: float, per_decade: int = 64,
                      head_exponent: float = 0.0, tail_exponent: float = -4.0
                      ) -> "RadialGridCharge":
        decades = math.log10(k_max / k_min)
        n = max(4, int(round(per_decade * decades)) + 1)
        nodes = np.geomspace(k_min, k_max, n)
        vals = np.asarray(fn(nodes), dtype=complex)
        return cls(tuple(nodes), tuple(vals), head_exponent, tail_exponent)


RadialProfile = Union[PowerLawCharge, GaussianTimesK, GaussianBump, RadialGridCharge]


def profile_values(profile: RadialProfile, k) -> np.ndarray:
    """Evaluate a radial profile on an array of momenta k > 0."""
    k_arr = np.asarray(k, dtype=float)
    if isinstance(profile, PowerLawCharge):
        with np.errstate(divide="ignore", over="ignore", under="ignore"):
            out = profile.amplitude * k_arr ** (-profile.exponent)
        out = np.asarray(out, dtype=complex)
        if profile.truncation == "above":
            out = np.where(k_arr >= profile.radius, out, 0.0)
        elif profile.truncation == "below":
            out = np.where(k_arr < profile.radius, out, 0.0)
        return out
    if isinstance(profile, GaussianTimesK):
        return profile.amplitude * k_arr * np.exp(-((k_arr / profile.scale) ** 2))
    if isinstance(profile, GaussianBump):
        z = (k_arr - profile.center) / profile.width
        return profile.amplitude * np.exp(-(z**2))
    if isinstance(profile, RadialGridCharge):
        return _grid_values(profile, k_arr)
    raise TypeError(f"not a radial profile: {profile!r}")


def _grid_values(profile: RadialGridCharge, k: np.ndarray) -> np.ndarray:
    re, im = profile._interpolators()
    k_min, k_max = profile.nodes[0], profile.nodes[-1]
    out = np.empty(np.shape(k), dtype=complex)
    k = np.atleast_1d(k)
    out = np.atleast_1d(out)
    inside = (k >= k_min) & (k <= k_max)
    logk = np.log(np.where(inside, k, k_min))
    out[inside] = re(logk[inside]) + 1j * im(logk[inside])
    lo = k < k_min
    if np.any(lo):
        out[lo] = profile.values[0] * (k[lo] / k_min) ** profile.head_exponent
    hi = k > k_max
    if np.any(hi):
        with np.errstate(under="ignore"):
            out[hi] = profile.values[-1] * (k[hi] / k_max) ** profile.tail_exponent
    return out


def profile_support(profile: RadialProfile) -> tuple[float, float]:
    """(k_lo, k_hi) outside which the profile is identically zero."""
    if isinstance(profile, PowerLawCharge):
        if profile.truncation == "above":
            return profile.radius, math.inf
        if profile.truncation == "below":
            return 0.0, profile.radius
    return 0.0, math.inf


def profile_breakpoints(profile: RadialProfile) -> tuple[float, ...]:
    """Interior abscissas where the profile is not smooth."""
    if isinstance(profile, PowerLawCharge) and profile.truncation is not None:
        return (profile.radius,)
    if isinstance(profile, RadialGridCharge):
        return (profile.nodes[0], profile.nodes[-1])
    return ()


def profile_outer_scale(profile: RadialProfile) -> float:
    """Momentum beyond which the profile is in its asymptotic regime."""
    if isinstance(profile, PowerLawCharge):
        return profile.radius if profile.truncation is not None else 1.0
    if isinstance(profile, GaussianTimesK):
        return 8.0 * profile.scale
    if isinstance(profile, GaussianBump):
        return profile.center + 10.0 * profile.width
    return profile.nodes[-1]


def profile_head_exponent(profile: RadialProfile) -> float:
    """alpha with profile ~ k^alpha as k -> 0 within its support."""
    if isinstance(profile, PowerLawCharge):
        return 0.0 if profile.truncation == "above" else -profile.exponent
    if isinstance(profile, GaussianTimesK):
        return 1.0
    if isinstance(profile, GaussianBump):
        return 0.0
    return profile.head_exponent


def profile_tail_exponent(profile: RadialProfile) -> float:
    """gamma with profile ~ k^gamma as k -> inf (use -inf for super-fast decay)."""
    if isinstance(profile, PowerLawCharge):
        return 0.0 if profile.truncation == "below" else -profile.exponent
    if isinstance(profile, (GaussianTimesK, GaussianBump)):
        return -math.inf
    return profile.tail_exponent


@dataclass(frozen=True)
class SectorCharge:
    """A radial profile tagged with its angular sector."""

    sector: SectorIndex
    profile: RadialProfile
    norm_note: str = ""

    @property
    def ell(self) -> int:
        return self.sector.ell


@dataclass(frozen=True)
class ExtensionParams:
    """The triple beta = (beta_-1, beta_0, beta_+1), entries real or +inf.

    An entry of +inf pins the corresponding singular-charge amplitude to
    zero (that azimuthal channel carries no extra extension).
    """

    beta: tuple[float, float, float] = field(default=(math.inf, math.inf, math.inf))

    def __post_init__(self):
        if len(self.beta) != 3:
            raise DomainError("beta must have exactly three entries")
        for b in self.beta:
            if math.isnan(b) or b == -math.inf:
                raise DomainError(f"beta entries must be real or +inf, got {b!r}")

    @property
    def finite_entries(self) -> tuple[float, ...]:
        return tuple(b for b in self.beta if math.isfinite(b))

    @property
    def all_nonnegative(self) -> bool:
        return all(b >= 0 for b in self.finite_entries)
