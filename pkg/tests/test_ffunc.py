"""Resonance function: representations, monotonicity, endpoint behavior."""

import math

import numpy as np
import pytest

from stmtri import ffunc
from stmtri.errors import DomainError, NonConvergedError
from stmtri.ffunc import FRep, f_diag, f_offdiag, f_total
from stmtri.quad import QuadSpec

REPS = (FRep.DIRECT_INTEGRAL, FRep.ANTISYMMETRIZED, FRep.SERIES)


class TestDiagonal:
    def test_value_at_one(self):
        assert f_diag(1.0) == pytest.approx(math.pi * math.sqrt(3) / 2, rel=1e-14)

    def test_small_mass_limit(self):
        assert f_diag(1e-12) < 1e-5

    def test_large_mass_limit(self):
        # sqrt(m(m+2))/(m+1) -> 1, so the diagonal tends to pi
        assert f_diag(1e10) == pytest.approx(math.pi, rel=1e-9)

    def test_strictly_increasing(self):
        grid = np.geomspace(1e-3, 1e3, 25)
        vals = [f_diag(float(m)) for m in grid]
        assert all(x < y for x, y in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            f_diag(0.0)
        with pytest.raises(DomainError):
            f_diag(-1.0)


class TestOffDiagonal:
    def test_negative_for_odd_sectors(self):
        for ell in (1, 3):
            for m in (0.05, 0.2, 1.0):
                for s in (0.0, 0.5, 1.0):
                    rep = FRep.ANTISYMMETRIZED
                    assert f_offdiag(ell, m, s, rep) < 0.0

    def test_even_sector_rejected(self):
        with pytest.raises(DomainError):
            f_offdiag(2, 0.1, 0.5)

    def test_direct_rejected_at_s_equal_one(self):
        with pytest.raises(DomainError):
            f_offdiag(1, 0.1, 1.0, FRep.DIRECT_INTEGRAL)

    def test_s_out_of_range(self):
        with pytest.raises(DomainError):
            f_offdiag(1, 0.1, 1.5)

    def test_series_budget_exhaustion_reported(self):
        # the series tail ratio is 1/(m+1)^2; tiny masses cannot reach a
        # tight tolerance within the term budget
        with pytest.raises(NonConvergedError):
            f_offdiag(1, 0.005, 0.5, FRep.SERIES,
                      QuadSpec(rel_tol=1e-12))


class TestRepresentationAgreement:
    @pytest.mark.parametrize("ell", [1, 3])
    @pytest.mark.parametrize("m", [0.05, 0.09, 0.2])
    @pytest.mark.parametrize("s", [0.0, 0.5])
    def test_three_way(self, ell, m, s):
        vals = [f_total(ell, m, s, rep) for rep in REPS]
        scale = max(max(abs(v) for v in vals), f_diag(m))
        assert (max(vals) - min(vals)) / scale < 1e-8

    def test_antisym_and_series_at_s_equal_one(self):
        for ell in (1, 3):
            va = f_total(ell, 0.09, 1.0, FRep.ANTISYMMETRIZED)
            vs = f_total(ell, 0.09, 1.0, FRep.SERIES)
            assert va == pytest.approx(vs, rel=1e-8)


class TestMonotonicity:
    def test_increasing_in_mass(self):
        for ell in (1, 3):
            for s in (0.0, 0.5, 0.9):
                grid = np.linspace(0.01, 0.5, 20)
                vals = [f_total(ell, float(m), s) for m in grid]
                assert all(x < y for x, y in zip(vals, vals[1:]))

    def test_decreasing_in_s(self):
        for ell in (1, 3):
            for m in (0.05, 0.09, 0.2):
                grid = np.linspace(0.0, 0.95, 12)
                vals = [f_total(ell, m, float(s)) for s in grid]
                assert all(x > y for x, y in zip(vals, vals[1:]))

    def test_sector_ordering(self):
        for ell in (1, 3):
            for m in (0.05, 0.09, 0.2):
                for s in (0.0, 0.5, 0.9):
                    assert f_total(ell, m, s) < f_total(ell + 2, m, s)

    def test_negative_at_vanishing_mass(self):
        for s in (0.0, 0.25, 0.5, 0.75, 1.0):
            rep = FRep.ANTISYMMETRIZED
            assert f_total(1, 1e-5, s, rep) < 0.0


class TestRootNeighborhood:
    def test_stated_root_values(self):
        # the resonance function vanishes at the printed critical masses
        assert abs(f_total(1, 0.0735, 0.0)) < 1e-3
        assert abs(f_total(1, 0.116, 1.0, FRep.ANTISYMMETRIZED)) < 1e-3
        assert abs(f_total(3, 0.0142, 1.0, FRep.ANTISYMMETRIZED)) < 2e-3
