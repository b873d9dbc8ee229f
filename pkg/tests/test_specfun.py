"""Special-function kernel: closed forms against quadrature oracles."""

import math

import numpy as np
import pytest

from stmtri import quad, specfun
from stmtri.errors import DomainError
from stmtri.quad import DEFAULT_SPEC, SingularityHint
from stmtri.specfun import (SectorIndex, beta_half, inner_radial, legendre,
                            legendre_kernel_moment, odd_moment)


class TestLegendre:
    def test_stated_values(self):
        assert legendre(0, 0.3) == 1.0
        assert legendre(1, 0.5) == 0.5
        assert legendre(3, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_recurrence_matches_explicit_polynomials(self):
        t = np.linspace(-1.0, 1.0, 100)
        p1 = t
        p3 = 0.5 * (5 * t**3 - 3 * t)
        p5 = 0.125 * (63 * t**5 - 70 * t**3 + 15 * t)
        assert np.max(np.abs(legendre(1, t) - p1)) < 1e-14
        assert np.max(np.abs(legendre(3, t) - p3)) < 1e-14
        assert np.max(np.abs(legendre(5, t) - p5)) < 1e-14

    def test_bounded_by_one(self):
        t = np.linspace(-1.0, 1.0, 257)
        for ell in range(8):
            assert np.max(np.abs(legendre(ell, t))) <= 1.0 + 1e-12

    def test_domain_error(self):
        with pytest.raises(DomainError):
            legendre(2, 1.5)
        with pytest.raises(DomainError):
            legendre(-1, 0.0)


class TestSectorIndex:
    def test_validation(self):
        SectorIndex(3, 2)
        with pytest.raises(DomainError):
            SectorIndex(1, 2)
        with pytest.raises(DomainError):
            SectorIndex(-1)

    def test_oddness(self):
        assert SectorIndex(1).is_odd
        assert not SectorIndex(2).is_odd


class TestBetaHalf:
    def test_stated_values(self):
        assert beta_half(0, 0) == pytest.approx(2.0, rel=1e-14)
        assert beta_half(0, 1) == pytest.approx(4.0 / 3.0, rel=1e-14)
        assert beta_half(1, 1) == pytest.approx(4.0 / 15.0, rel=1e-14)

    def test_against_quadrature(self):
        for j in (0, 2, 5):
            for ell in (0, 1, 3):
                want = quad.integrate_finite(
                    lambda t: t ** (2 * j) * (1 - t * t) ** ell,
                    -1.0, 1.0).require()
                assert beta_half(j, ell) == pytest.approx(want, rel=1e-12)

    def test_positive_at_large_arguments(self):
        assert beta_half(400, 7) > 0.0


class TestOddMoment:
    def test_stated_values(self):
        assert odd_moment(1, 0) == pytest.approx(2.0 / 3.0, rel=1e-14)
        assert odd_moment(3, 0) == 0.0
        assert odd_moment(3, 1) == pytest.approx(4.0 / 35.0, rel=1e-14)

    def test_even_sector_rejected(self):
        with pytest.raises(DomainError):
            odd_moment(2, 1)

    @pytest.mark.parametrize("ell", [1, 3, 5])
    def test_against_quadrature(self, ell):
        for n in range(7):
            want = quad.integrate_finite(
                lambda t: t ** (2 * n + 1) * legendre(ell, t),
                -1.0, 1.0).require()
            assert abs(odd_moment(ell, n) - want) < 1e-10


class TestInnerRadial:
    def test_stated_values(self):
        assert inner_radial(0.0, 0.0) == pytest.approx(math.pi / 2, rel=1e-14)
        assert inner_radial(0.0, 0.5) == pytest.approx(
            math.pi / math.sqrt(2.0), rel=1e-13)
        assert inner_radial(0.5, 0.0) == pytest.approx(
            2 * math.pi / (3 * math.sqrt(3.0)), rel=1e-14)

    def test_closed_form_vs_quadrature_oracle(self):
        # oracle: plain quadrature of the defining integral, with the
        # slowly decaying tail folded onto (0, 1/B) by p -> 1/p
        for b in np.arange(-0.9, 0.95, 0.2):
            for s in np.arange(0.0, 0.95, 0.1):
                def body(p, b=b, s=s):
                    return p**s / (p * p + 2.0 * b * p + 1.0)

                def tail(u, b=b, s=s):
                    return u ** (-s) / (1.0 + 2.0 * b * u + u * u)

                tail_spec = DEFAULT_SPEC.with_hints(SingularityHint(0.0, -s))
                want = quad.integrate_finite(body, 0.0, 1.0).require() \
                    + quad.integrate_finite(tail, 0.0, 1.0, tail_spec).require()
                got = inner_radial(float(b), float(s))
                assert got == pytest.approx(want, rel=1e-9)

    def test_strictly_decreasing_in_b(self):
        for s in (0.0, 0.3, 0.7):
            vals = [inner_radial(b, s) for b in np.linspace(-0.9, 0.9, 19)]
            assert all(x > y for x, y in zip(vals, vals[1:]))

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            inner_radial(1.0, 0.5)
        with pytest.raises(DomainError):
            inner_radial(0.0, 1.0)


class TestLegendreKernelMoment:
    @pytest.mark.parametrize("ell,power", [(1, 1), (3, 1), (5, 1),
                                           (1, 2), (3, 2)])
    def test_against_quadrature(self, ell, power):
        # exercise both the series branch (small B/A) and the recurrence
        for a_val, b_val in [(3.0, 0.01), (3.0, 1.0), (3.0, 2.9),
                             (1.5, 1.4), (10.0, 0.5), (2.0, 1.2)]:
            def f(t, A=a_val, B=b_val):
                return legendre(ell, t) / (A + B * t) ** power

            want = quad.integrate_finite(f, -1.0, 1.0).require()
            got = legendre_kernel_moment(ell, a_val, b_val, power)
            assert got == pytest.approx(want, rel=2e-11, abs=1e-15)

    def test_vectorized(self):
        a = np.array([2.0, 3.0, 10.0])
        b = np.array([1.5, 0.1, 0.001])
        got = legendre_kernel_moment(1, a, b, 1)
        for i in range(3):
            assert got[i] == pytest.approx(
                legendre_kernel_moment(1, float(a[i]), float(b[i]), 1),
                rel=1e-14)

    def test_negative_for_odd_sector(self):
        assert legendre_kernel_moment(1, 2.0, 1.0, 1) < 0.0
        assert legendre_kernel_moment(3, 2.0, 1.0, 2) < 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            legendre_kernel_moment(1, 1.0, 1.0, 1)
        with pytest.raises(DomainError):
            legendre_kernel_moment(1, 2.0, 1.0, 3)
