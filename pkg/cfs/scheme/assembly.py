"""
Assembly and solution of the complete flux scheme.

For interior node k the flux balance F_{k+1/2} - F_{k-1/2} = h s_k becomes,
after division by h,

    -a_W phi_{k-1} + a_C phi_k - a_E phi_{k+1} = b_W s_{k-1} + b_C s_k + b_E s_{k+1}

with s = q - c_eff phi (+ g(x, phi) for a nonlinear source hook). The
phi-dependent part of s is folded into the matrix, boundary values go to the
right-hand side, and the tridiagonal system is solved directly.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from cfs.exceptions import AssemblyError, ConvergenceError, DomainError
from cfs.problems.problem import Grid, ProblemSpec, conservative_reaction, evaluate_field, make_grid
from cfs.scheme.flux import InterfaceCoefficients, interface_coefficients_all, interface_peclet_all, numerical_flux
from cfs.scheme.special_functions import ASYMPTOTIC_THRESHOLD, bernoulli, weight
from cfs.scheme.tridiagonal import TridiagonalSystem, thomas_solve
from config.config import CFS_PICARD_MAX_ITER, CFS_PICARD_TOL

logger = logging.getLogger("cfs.scheme.assembly")


# =============================================================================
# Stencil
# =============================================================================

@dataclass(frozen=True)
class StencilRow:
    """Difference weights (a_*) and source weights (b_*) of one interior node."""
    a_w: float
    a_c: float
    a_e: float
    b_w: float
    b_c: float
    b_e: float


@dataclass(frozen=True)
class Stencil:
    """Three-point stencils of every interior node, as arrays of length N-2."""
    a_w: np.ndarray
    a_c: np.ndarray
    a_e: np.ndarray
    b_w: np.ndarray
    b_c: np.ndarray
    b_e: np.ndarray
    coefficients: InterfaceCoefficients
    h: float

    def row(self, i: int) -> StencilRow:
        """Stencil of interior row i (node i+1 of the grid)."""
        return StencilRow(
            a_w=float(self.a_w[i]), a_c=float(self.a_c[i]), a_e=float(self.a_e[i]),
            b_w=float(self.b_w[i]), b_c=float(self.b_c[i]), b_e=float(self.b_e[i]),
        )


def build_stencil(spec: ProblemSpec, grid: Grid) -> Stencil:
    """Build the operators L^h and W^h from the interface coefficients."""
    h = grid.h
    ic = interface_coefficients_all(interface_peclet_all(spec, grid), h)
    return Stencil(
        a_w=ic.alpha[:-1] / h,
        a_c=(ic.alpha[1:] + ic.beta[:-1]) / h,
        a_e=ic.beta[1:] / h,
        b_w=ic.gamma[:-1].copy(),
        b_c=1.0 - ic.gamma[1:] + ic.delta[:-1],
        b_e=-ic.delta[1:],
        coefficients=ic,
        h=h,
    )


def apply_difference_operator(stencil: Stencil, phi: np.ndarray) -> np.ndarray:
    """(L^h phi)_k for interior nodes, given nodal values including the boundary."""
    phi = np.asarray(phi, dtype=float)
    return -stencil.a_w * phi[:-2] + stencil.a_c * phi[1:-1] - stencil.a_e * phi[2:]


def apply_weighting_operator(stencil: Stencil, s: np.ndarray) -> np.ndarray:
    """(W^h s)_k for interior nodes, given nodal values including the boundary."""
    s = np.asarray(s, dtype=float)
    return stencil.b_w * s[:-2] + stencil.b_c * s[1:-1] + stencil.b_e * s[2:]


# =============================================================================
# Assembly
# =============================================================================

def source_values(spec: ProblemSpec, x: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Full source s = q - c_eff phi (+ g(x, phi)) at the nodes."""
    s = evaluate_field(spec.source, x) - conservative_reaction(spec, x) * phi
    if spec.nonlinear_source is not None:
        s = s + np.asarray(spec.nonlinear_source(x, phi), dtype=float)
    return s


def _assemble(
    spec: ProblemSpec, grid: Grid, stencil: Stencil, extra_source: np.ndarray | None = None
) -> TridiagonalSystem:
    x = grid.nodes
    q = evaluate_field(spec.source, x)
    if extra_source is not None:
        q = q + extra_source
    c = conservative_reaction(spec, x)

    sub = -stencil.a_w + stencil.b_w * c[:-2]
    diag = stencil.a_c + stencil.b_c * c[1:-1]
    sup = -stencil.a_e + stencil.b_e * c[2:]
    rhs = apply_weighting_operator(stencil, q)

    rhs[0] -= sub[0] * spec.phi_left
    rhs[-1] -= sup[-1] * spec.phi_right
    sub[0] = 0.0
    sup[-1] = 0.0

    bad = np.flatnonzero(~(diag > 0.0))
    if bad.size:
        row = int(bad[0])
        raise AssemblyError(
            f"Non-positive diagonal {diag[row]:.3e} in row {row} (x = {x[row + 1]:.6g}) "
            f"for problem '{spec.name}' with N = {grid.n_points}; refine the grid",
            row=row,
        )
    return TridiagonalSystem(sub=sub, diag=diag, sup=sup, rhs=rhs)


def assemble(spec: ProblemSpec, grid: Grid) -> TridiagonalSystem:
    """
    Assemble the tridiagonal system of the interior unknowns.

    Reaction terms are folded into all three bands with the source weights,
    boundary values (and their source contributions) into the rhs. A
    nonlinear source hook is not included; ``solve`` iterates on it.

    Raises:
        AssemblyError: if a diagonal entry is not positive.
    """
    return _assemble(spec, grid, build_stencil(spec, grid))


# =============================================================================
# Solve
# =============================================================================

@dataclass(frozen=True)
class Solution:
    """Nodal values of a solved problem, boundary values included."""
    grid: Grid
    values: np.ndarray
    picard_iterations: int = 0
    picard_trace: tuple[float, ...] = field(default_factory=tuple)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes


def _with_boundary(spec: ProblemSpec, interior: np.ndarray) -> np.ndarray:
    return np.concatenate(([spec.phi_left], interior, [spec.phi_right]))


def solve(
    spec: ProblemSpec,
    n_points: int | None = None,
    picard_tol: float = CFS_PICARD_TOL,
    picard_max_iter: int = CFS_PICARD_MAX_ITER,
) -> Solution:
    """
    Solve the problem on a uniform grid.

    Affine sources are solved in one pass. A nonlinear source hook is lagged
    in a fixed-point iteration until the max-norm update is at most
    ``picard_tol``.

    Args:
        spec: The problem.
        n_points: Grid size (defaults to the problem's own).
        picard_tol: Stopping tolerance of the fixed-point iteration.
        picard_max_iter: Iteration cap.

    Returns:
        Solution: nodal values with phi_left and phi_right at the ends.

    Raises:
        GridError: for n_points < 3.
        AssemblyError, SingularSystemError: from assembly and the solver.
        ConvergenceError: if the fixed-point iteration does not converge.
    """
    n_points = spec.default_n_points if n_points is None else n_points
    grid = make_grid(n_points)
    stencil = build_stencil(spec, grid)

    if spec.nonlinear_source is None:
        values = _with_boundary(spec, thomas_solve(_assemble(spec, grid, stencil)))
        logger.debug(f"Solved '{spec.name}' on N = {grid.n_points}")
        return Solution(grid=grid, values=values)

    x = grid.nodes
    phi = spec.phi_left + (spec.phi_right - spec.phi_left) * x
    trace: list[float] = []
    for iteration in range(1, picard_max_iter + 1):
        extra = np.asarray(spec.nonlinear_source(x, phi), dtype=float)
        updated = _with_boundary(spec, thomas_solve(_assemble(spec, grid, stencil, extra)))
        change = float(np.max(np.abs(updated - phi)))
        trace.append(change)
        phi = updated
        if not np.isfinite(change):
            raise ConvergenceError(
                f"Fixed-point iteration for '{spec.name}' diverged at iteration {iteration}", trace
            )
        if change <= picard_tol:
            logger.debug(f"Fixed-point iteration for '{spec.name}' converged in {iteration} iterations")
            return Solution(grid=grid, values=phi, picard_iterations=iteration, picard_trace=tuple(trace))

    raise ConvergenceError(
        f"Fixed-point iteration for '{spec.name}' did not reach {picard_tol:g} in {picard_max_iter} "
        f"iterations (last update {trace[-1]:.3e})",
        trace,
    )


def interface_fluxes(spec: ProblemSpec, solution: Solution) -> np.ndarray:
    """Numerical flux F_{j+1/2} at every interface of a solved problem."""
    grid = solution.grid
    phi = solution.values
    s = source_values(spec, grid.nodes, phi)
    ic = build_stencil(spec, grid).coefficients
    return numerical_flux(ic, phi[:-1], phi[1:], s[:-1], s[1:], grid.h)


# =============================================================================
# Stability diagnostic
# =============================================================================

def _log_bernoulli(z: float) -> float:
    if z > ASYMPTOTIC_THRESHOLD:
        return float(np.log(z) - z)
    return float(np.log(bernoulli(z)))


def stability_bound(epsilon: float, mu: float, b: float) -> float | None:
    """
    Closed-form bound -(1/b) ((1/J) ln B(J) + W(J)), J = b / (eps + mu b).

    Informational only; None when b = 0.
    """
    if b == 0.0:
        return None
    diffusion = epsilon + mu * b
    if diffusion <= 0.0:
        raise DomainError(f"eps + mu*b must be positive, got {diffusion}")
    j = b / diffusion
    bound = -(_log_bernoulli(j) / j + weight(j)) / b
    logger.debug(f"Stability bound for eps={epsilon:g}, mu={mu:g}, b={b:g}: J={j:.3e}, bound={bound:.6g}")
    return float(bound)
