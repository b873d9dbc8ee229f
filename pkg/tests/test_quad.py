"""Quadrature engine: stated examples, tolerance contract, invariants."""

import math

import numpy as np
import pytest

from stmtri import quad
from stmtri.errors import IntegrandError, TailDivergenceError
from stmtri.quad import DEFAULT_SPEC, QuadSpec, SingularityHint


def test_constant_integrand():
    r = quad.integrate_finite(lambda t: np.ones_like(t), 0.0, 1.0, DEFAULT_SPEC)
    assert r.converged
    assert r.value == pytest.approx(1.0, abs=1e-13)


def test_legendre_orthogonality_to_constants():
    from stmtri.specfun import legendre

    r = quad.integrate_finite(lambda t: legendre(3, t), -1.0, 1.0, DEFAULT_SPEC)
    assert r.converged
    assert abs(r.value) < 1e-13


def test_declared_sqrt_endpoint_singularity():
    hinted = DEFAULT_SPEC.with_hints(SingularityHint(-1.0, -0.5))
    r = quad.integrate_finite(lambda t: 1.0 / np.sqrt(1.0 + t), -1.0, 1.0, hinted)
    assert r.converged
    assert r.value == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-10)


def test_semi_infinite_arctangent():
    r = quad.integrate_semi_infinite(lambda p: 1.0 / (p * p + 1.0), 0.0)
    assert r.converged
    assert r.value == pytest.approx(math.pi / 2.0, rel=1e-10)


def test_semi_infinite_power_tail_hint():
    # int_sqrt(lam)^inf k^(-3+2s) dk = lam^(s-1)/(2(1-s)) at lam=1, s=1/2
    s = 0.5
    hinted = DEFAULT_SPEC.with_hints(SingularityHint(math.inf, -3.0 + 2 * s))
    r = quad.integrate_semi_infinite(lambda k: k ** (-3.0 + 2 * s), 1.0, hinted)
    assert r.converged
    assert r.value == pytest.approx(1.0, rel=1e-12)


def test_semi_infinite_slow_tail():
    r = quad.integrate_semi_infinite(
        lambda p: np.sqrt(p) / (p * p + 1.0), 0.0)
    # tail decay p^-1.5 sits at the engine's honest-resolution edge; the
    # value is good to ~1e-7 and the estimate must cover the truth
    want = math.pi / math.sqrt(2.0)
    assert abs(r.value - want) < 1e-6
    assert abs(r.value - want) <= 10.0 * max(r.error_estimate, 1e-15)


def test_non_convergence_is_flagged_not_silent():
    # brutally tight budget on a needle integrand
    tight = QuadSpec(rel_tol=1e-14, abs_tol=1e-16, max_subdivisions=2)
    r = quad.integrate_finite(
        lambda t: 1.0 / ((t - 0.3737) ** 2 + 1e-8), 0.0, 1.0, tight)
    assert not r.converged
    with pytest.raises(Exception):
        r.require()


def test_nan_integrand_raises():
    def bad(t):
        out = np.ones_like(t)
        out[t > 0.5] = np.nan
        return out

    with pytest.raises(IntegrandError):
        quad.integrate_finite(bad, 0.0, 1.0, DEFAULT_SPEC)


def test_growing_tail_raises():
    with pytest.raises(TailDivergenceError):
        quad.integrate_semi_infinite(lambda p: p * p, 0.0)


def test_invalid_interval():
    with pytest.raises(ValueError):
        quad.integrate_finite(lambda t: t, 1.0, 0.0)
    with pytest.raises(ValueError):
        quad.integrate_semi_infinite(lambda t: np.exp(-t), -1.0)


def _random_poly_pair(rng):
    ca = rng.normal(size=6)
    cb = rng.normal(size=6)

    def f(t):
        return sum(c * t**j for j, c in enumerate(ca)) * np.exp(-t * t)

    def g(t):
        return sum(c * t**j for j, c in enumerate(cb)) * np.cos(t)

    return f, g


def test_linearity(rng):
    f, g = _random_poly_pair(rng)
    al, be = 0.7, -1.3
    lhs = quad.integrate_finite(
        lambda t: al * f(t) + be * g(t), -1.0, 2.0).require()
    rhs = al * quad.integrate_finite(f, -1.0, 2.0).require() \
        + be * quad.integrate_finite(g, -1.0, 2.0).require()
    scale = max(abs(lhs), 1.0)
    assert abs(lhs - rhs) <= 10.0 * DEFAULT_SPEC.rel_tol * scale


def test_interval_additivity(rng):
    f, _ = _random_poly_pair(rng)
    whole = quad.integrate_finite(f, 0.0, 3.0).require()
    for c in (0.1, 1.0, 2.9):
        split = quad.integrate_finite(f, 0.0, c).require() \
            + quad.integrate_finite(f, c, 3.0).require()
        assert abs(whole - split) <= 20.0 * DEFAULT_SPEC.rel_tol * max(abs(whole), 1.0)


def test_semi_infinite_split_consistency():
    def f(p):
        return np.exp(-p) / (1.0 + p * p)

    whole = quad.integrate_semi_infinite(f, 0.0).require()
    for b in (0.5, 2.0, 10.0):
        split = quad.integrate_finite(f, 0.0, b).require() \
            + quad.integrate_semi_infinite(f, b).require()
        assert abs(whole - split) <= 20.0 * DEFAULT_SPEC.rel_tol * abs(whole)


def test_determinism():
    def f(t):
        return np.exp(-t) * np.sin(3.0 * t)

    r1 = quad.integrate_finite(f, 0.0, 2.0)
    r2 = quad.integrate_finite(f, 0.0, 2.0)
    assert r1.value == r2.value
    assert r1.error_estimate == r2.error_estimate
    assert r1.subdivisions_used == r2.subdivisions_used
    s1 = quad.integrate_semi_infinite(lambda p: 1.0 / (p**2 + 1.0), 0.0)
    s2 = quad.integrate_semi_infinite(lambda p: 1.0 / (p**2 + 1.0), 0.0)
    assert s1.value == s2.value


def test_converged_flag_matches_contract():
    r = quad.integrate_finite(lambda t: np.exp(t), 0.0, 1.0)
    assert r.converged
    assert r.error_estimate <= max(DEFAULT_SPEC.abs_tol,
                                   DEFAULT_SPEC.rel_tol * abs(r.value))


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadSpec(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadSpec(abs_tol=-1.0)
    with pytest.raises(ValueError):
        QuadSpec(max_subdivisions=0)


def test_interior_breakpoint_hint():
    # |t - 0.5| kink declared as an exponent-0 feature point
    hinted = DEFAULT_SPEC.with_hints(SingularityHint(0.5, 0.0))
    r = quad.integrate_finite(lambda t: np.abs(t - 0.5), 0.0, 1.0, hinted)
    assert r.converged
    assert r.value == pytest.approx(0.25, rel=1e-12)
