"""Root-solving layer: critical masses, resonance exponent, certificates."""

import numpy as np
import pytest

from stmtri import criticality
from stmtri.criticality import critical_pair, m_of_s, s_of_m
from stmtri.errors import DomainError, RegimeError


class TestCriticalMasses:
    def test_lower_edge_matches_printed_value(self):
        root = m_of_s(1, 0.0)
        assert 0.0730 <= root.value <= 0.0740
        assert root.value == pytest.approx(0.0735, abs=5e-4)

    def test_upper_edge_matches_printed_value(self):
        root = m_of_s(1, 1.0)
        assert root.value == pytest.approx(0.116, abs=1e-3)

    def test_third_sector_upper_edge(self):
        root = m_of_s(3, 1.0)
        assert root.value == pytest.approx(0.0142, abs=3e-4)

    def test_residual_certificates(self):
        for ell, s in [(1, 0.0), (1, 0.5), (1, 1.0), (3, 1.0)]:
            assert m_of_s(ell, s).residual <= 1e-10

    def test_even_sector_rejected(self):
        with pytest.raises(DomainError):
            m_of_s(2, 0.5)
        with pytest.raises(DomainError):
            critical_pair(2)

    def test_pair_invariants(self):
        pair1 = critical_pair(1)
        pair3 = critical_pair(3)
        pair5 = critical_pair(5)
        for pair in (pair1, pair3, pair5):
            assert pair.m_star < pair.m_star_star
        # componentwise decreasing in the sector index
        assert pair3.m_star < pair1.m_star
        assert pair3.m_star_star < pair1.m_star_star
        assert pair5.m_star < pair3.m_star
        assert pair5.m_star_star < pair3.m_star_star

    def test_no_window_overlap_between_sectors(self):
        assert critical_pair(3).m_star_star < critical_pair(1).m_star


class TestResonanceExponent:
    def test_roundtrip(self):
        for s in (0.1, 0.3, 0.5, 0.7, 0.9):
            m = m_of_s(1, s).value
            back = s_of_m(m).value
            assert abs(back - s) < 1e-6

    def test_endpoint_roundtrips_snap(self):
        pair = critical_pair(1)
        assert s_of_m(pair.m_star).value == 0.0
        assert s_of_m(pair.m_star_star).value == 1.0

    def test_monotone_increasing(self):
        pair = critical_pair(1)
        grid = np.linspace(pair.m_star + 1e-4, pair.m_star_star - 1e-4, 20)
        vals = [s_of_m(float(m)).value for m in grid]
        assert all(x < y for x, y in zip(vals, vals[1:]))

    def test_residual_certificates(self):
        for m in (0.08, 0.09, 0.10, 0.11):
            assert s_of_m(m).residual <= 1e-10

    def test_out_of_regime_identifies_bound(self):
        with pytest.raises(RegimeError) as err:
            s_of_m(0.05)
        assert err.value.bound_name == "m*"
        with pytest.raises(RegimeError) as err:
            s_of_m(0.5)
        assert err.value.bound_name == "m**"

    def test_known_value(self):
        # frozen from an independent 30-digit evaluation of the root
        assert s_of_m(0.09).value == pytest.approx(0.6980754837606419,
                                                   abs=5e-10)


def test_bracket_scan_determinism():
    a = m_of_s(1, 0.25)
    b = m_of_s(1, 0.25)
    assert a.value == b.value and a.residual == b.residual
