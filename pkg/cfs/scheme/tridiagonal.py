"""
Tridiagonal systems: Thomas solver and M-matrix diagnostics.
"""
import logging
from dataclasses import dataclass

import numpy as np

from cfs.exceptions import SingularSystemError
from config.config import CFS_PIVOT_FLOOR

logger = logging.getLogger("cfs.scheme.tridiagonal")


@dataclass(frozen=True)
class TridiagonalSystem:
    """
    Row i reads sub[i] u[i-1] + diag[i] u[i] + sup[i] u[i+1] = rhs[i].

    sub[0] and sup[-1] are unused.
    """
    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        n = len(self.diag)
        if not (len(self.sub) == len(self.sup) == len(self.rhs) == n):
            raise ValueError(
                f"Inconsistent band lengths: sub={len(self.sub)}, diag={n}, sup={len(self.sup)}, rhs={len(self.rhs)}"
            )

    @property
    def size(self) -> int:
        return len(self.diag)

    def with_rhs(self, rhs: np.ndarray) -> "TridiagonalSystem":
        return TridiagonalSystem(sub=self.sub, diag=self.diag, sup=self.sup, rhs=np.asarray(rhs, dtype=float))

    def to_dense(self) -> np.ndarray:
        """Dense matrix, for diagnostics and tests."""
        n = self.size
        matrix = np.diag(np.asarray(self.diag, dtype=float))
        if n > 1:
            matrix += np.diag(np.asarray(self.sub[1:], dtype=float), -1)
            matrix += np.diag(np.asarray(self.sup[:-1], dtype=float), 1)
        return matrix

    def matvec(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        out = self.diag * u
        out[1:] += self.sub[1:] * u[:-1]
        out[:-1] += self.sup[:-1] * u[1:]
        return out


@dataclass(frozen=True)
class MMatrixReport:
    """Pass/fail per M-matrix property of a tridiagonal system."""
    off_diagonal_nonpositive: bool
    diagonal_positive: bool
    weakly_diagonally_dominant: bool
    strictly_dominant_somewhere: bool
    irreducible: bool

    @property
    def passed(self) -> bool:
        return all(self.__dict__.values())

    def failures(self) -> list[str]:
        return [name for name, ok in self.__dict__.items() if not ok]


def thomas_solve(sys: TridiagonalSystem, pivot_floor: float = CFS_PIVOT_FLOOR) -> np.ndarray:
    """
    Solve a tridiagonal system by the Thomas algorithm (no pivoting).

    Args:
        sys: The system to solve.
        pivot_floor: Pivots with magnitude below this are treated as zero.

    Returns:
        np.ndarray: The solution vector.

    Raises:
        SingularSystemError: on a (near) zero pivot, with the offending row.
    """
    n = sys.size
    sub = np.asarray(sys.sub, dtype=float)
    diag = np.asarray(sys.diag, dtype=float)
    sup = np.asarray(sys.sup, dtype=float)
    rhs = np.asarray(sys.rhs, dtype=float)
    if n == 0:
        return np.empty(0)

    c_prime = np.zeros(n)
    d_prime = np.zeros(n)

    # Forward sweep
    for i in range(n):
        pivot = diag[i] - (sub[i] * c_prime[i - 1] if i else 0.0)
        if not abs(pivot) >= pivot_floor:
            raise SingularSystemError(f"Zero pivot {pivot:.3e} in row {i} of {n}", row=i)
        if i < n - 1:
            c_prime[i] = sup[i] / pivot
        d_prime[i] = (rhs[i] - (sub[i] * d_prime[i - 1] if i else 0.0)) / pivot

    # Back substitution
    u = np.empty(n)
    u[-1] = d_prime[-1]
    for i in range(n - 2, -1, -1):
        u[i] = d_prime[i] - c_prime[i] * u[i + 1]
    return u


def m_matrix_check(sys: TridiagonalSystem) -> MMatrixReport:
    """
    Check the sufficient conditions for an M-matrix.

    Off-diagonals non-positive, positive diagonal, weak diagonal dominance
    with a strict row, and irreducibility (no zero link in the band).
    Failures are logged, never raised.
    """
    n = sys.size
    sub = np.asarray(sys.sub, dtype=float)[1:]
    sup = np.asarray(sys.sup, dtype=float)[:-1]
    diag = np.asarray(sys.diag, dtype=float)

    off_row = np.zeros(n)
    off_row[1:] += np.abs(sub)
    off_row[:-1] += np.abs(sup)
    # Relative slack for rounding in the assembled coefficients
    slack = 1e-12 * np.maximum(np.abs(diag), off_row)

    report = MMatrixReport(
        off_diagonal_nonpositive=bool(np.all(sub <= 0.0) and np.all(sup <= 0.0)),
        diagonal_positive=bool(np.all(diag > 0.0)),
        weakly_diagonally_dominant=bool(np.all(diag >= off_row - slack)),
        strictly_dominant_somewhere=bool(np.any(diag > off_row + slack)),
        irreducible=bool(np.all(sub != 0.0) and np.all(sup != 0.0)),
    )
    if not report.passed:
        logger.warning(f"M-matrix check failed: {', '.join(report.failures())}")
    return report


def inverse_inf_norm(sys: TridiagonalSystem, pivot_floor: float = CFS_PIVOT_FLOOR) -> float:
    """
    Infinity norm of the inverse matrix.

    For an M-matrix the inverse is non-negative, so the norm is max(A^-1 1)
    from a single solve. Otherwise the inverse is built column by column.
    """
    n = sys.size
    if m_matrix_check(sys).passed:
        return float(np.max(thomas_solve(sys.with_rhs(np.ones(n)), pivot_floor)))

    logger.debug(f"Not an M-matrix, computing ||A^-1|| from {n} solves")
    row_sums = np.zeros(n)
    for k in range(n):
        unit = np.zeros(n)
        unit[k] = 1.0
        row_sums += np.abs(thomas_solve(sys.with_rhs(unit), pivot_floor))
    return float(np.max(row_sums))
