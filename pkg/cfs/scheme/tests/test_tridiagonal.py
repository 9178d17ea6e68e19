"""
Thomas solver and M-matrix diagnostic tests.

Usage:
    pytest cfs/scheme/tests/test_tridiagonal.py -v
"""
import logging

import numpy as np
import pytest

from cfs.exceptions import SingularSystemError
from cfs.scheme.tridiagonal import TridiagonalSystem, inverse_inf_norm, m_matrix_check, thomas_solve

logger = logging.getLogger(__name__)


def laplacian(n: int, rhs=None) -> TridiagonalSystem:
    rhs = np.zeros(n) if rhs is None else np.asarray(rhs, dtype=float)
    return TridiagonalSystem(sub=-np.ones(n), diag=2.0 * np.ones(n), sup=-np.ones(n), rhs=rhs)


def identity(n: int) -> TridiagonalSystem:
    return TridiagonalSystem(sub=np.zeros(n), diag=np.ones(n), sup=np.zeros(n), rhs=np.arange(1.0, n + 1))


# =============================================================================
# FIXTURES
# =============================================================================

@pytest.fixture(scope="module")
def random_systems() -> list[TridiagonalSystem]:
    """100 random diagonally dominant systems with n <= 64."""
    rng = np.random.default_rng(20240611)
    systems = []
    for _ in range(100):
        n = int(rng.integers(1, 65))
        sub = rng.uniform(-1.0, 1.0, n)
        sup = rng.uniform(-1.0, 1.0, n)
        diag = (np.abs(sub) + np.abs(sup) + rng.uniform(0.1, 2.0, n)) * rng.choice([-1.0, 1.0], n)
        systems.append(TridiagonalSystem(sub=sub, diag=diag, sup=sup, rhs=rng.normal(size=n)))
    return systems


# =============================================================================
# 1. THOMAS SOLVER
# =============================================================================

class TestThomasSolve:
    """Tests for thomas_solve."""

    def test_identity(self):
        """Test: the identity returns the right-hand side."""
        system = identity(5)
        assert np.array_equal(thomas_solve(system), system.rhs)

    def test_laplacian(self):
        """Test: tridiag(-1, 2, -1) u = (1, 0, 1) gives u = (1, 1, 1)."""
        assert np.allclose(thomas_solve(laplacian(3, [1.0, 0.0, 1.0])), 1.0, atol=1e-15)

    def test_matches_dense_solver(self, random_systems):
        """Test: agrees with dense elimination to 1e-12 relative on 100 random systems."""
        worst = 0.0
        for system in random_systems:
            expected = np.linalg.solve(system.to_dense(), system.rhs)
            got = thomas_solve(system)
            worst = max(worst, np.linalg.norm(got - expected) / np.linalg.norm(expected))
        logger.info(f"worst relative deviation from dense solve: {worst:.3e}")
        assert worst <= 1e-12

    def test_zero_pivot(self):
        """Test: a zero pivot raises SingularSystemError with its row."""
        system = TridiagonalSystem(
            sub=np.array([0.0, 1.0, 1.0]), diag=np.array([1.0, 1.0, 2.0]),
            sup=np.array([1.0, 1.0, 0.0]), rhs=np.ones(3),
        )
        with pytest.raises(SingularSystemError) as info:
            thomas_solve(system)
        assert info.value.row == 1

    def test_inconsistent_bands(self):
        """Test: bands of different lengths are rejected."""
        with pytest.raises(ValueError):
            TridiagonalSystem(sub=np.zeros(2), diag=np.ones(3), sup=np.zeros(3), rhs=np.ones(3))

    def test_matvec_round_trip(self, random_systems):
        """Test: A (A^-1 r) reproduces r."""
        system = random_systems[0]
        assert np.allclose(system.matvec(thomas_solve(system)), system.rhs, atol=1e-12)


# =============================================================================
# 2. M-MATRIX DIAGNOSTICS
# =============================================================================

class TestMMatrixCheck:
    """Tests for m_matrix_check and inverse_inf_norm."""

    def test_laplacian_passes(self):
        """Test: tridiag(-1, 2, -1) is an irreducibly diagonally dominant M-matrix."""
        report = m_matrix_check(laplacian(6))
        assert report.passed
        assert report.failures() == []

    def test_positive_off_diagonal_is_reported(self):
        """Test: a positive off-diagonal fails the sign check without raising."""
        system = TridiagonalSystem(
            sub=np.array([0.0, 0.5, -1.0]), diag=np.full(3, 3.0), sup=np.array([-1.0, -1.0, 0.0]), rhs=np.zeros(3)
        )
        report = m_matrix_check(system)
        assert not report.off_diagonal_nonpositive
        assert report.diagonal_positive
        assert "off_diagonal_nonpositive" in report.failures()

    def test_reducible_is_reported(self):
        """Test: a zero link in the band breaks irreducibility."""
        report = m_matrix_check(identity(4))
        assert not report.irreducible
        assert report.strictly_dominant_somewhere

    def test_identity_norm(self):
        """Test: ||I^-1|| = 1."""
        assert inverse_inf_norm(identity(7)) == pytest.approx(1.0)

    def test_laplacian_norm(self):
        """Test: tridiag(-1, 2, -1), n = 3 has inverse row sums (1.5, 2, 1.5)."""
        assert inverse_inf_norm(laplacian(3)) == pytest.approx(2.0, rel=1e-14)

    def test_general_matrix_norm(self, random_systems):
        """Test: the column-by-column path matches the dense inverse."""
        for system in random_systems[:10]:
            expected = np.max(np.sum(np.abs(np.linalg.inv(system.to_dense())), axis=1))
            assert inverse_inf_norm(system) == pytest.approx(expected, rel=1e-10)
