"""
Error norms, truncation error and grid convergence studies.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from cfs.exceptions import ProblemDefinitionError
from cfs.problems.problem import (
    Grid,
    ProblemSpec,
    ScalarField,
    effective_diffusion,
    evaluate_field,
    field_derivative,
    grid_from_step,
)
from cfs.scheme.assembly import Solution, apply_difference_operator, apply_weighting_operator, build_stencil, solve
from cfs.verification.models import ConvergenceReport
from config.config import CFS_EXACTNESS_TOL, CFS_H_LIST

logger = logging.getLogger("cfs.verification.convergence")


def max_norm_error(sol: Solution, exact: ScalarField) -> float:
    """max_j |phi_j - phi(x_j)| over all nodes."""
    return float(np.max(np.abs(sol.values - evaluate_field(exact, sol.grid.nodes))))


def continuous_operator(spec: ProblemSpec, exact: ScalarField, x: np.ndarray) -> np.ndarray:
    """
    Divergence of the exact flux, -(eps + mu b) phi'' + b phi' + (b + mu b')' phi.

    This equals q - c_eff phi when ``exact`` solves the problem.
    """
    phi = evaluate_field(exact, x)
    d_phi = field_derivative(exact, x, 1)
    d2_phi = field_derivative(exact, x, 2)
    b = evaluate_field(spec.advection, x)
    slope = np.zeros_like(x)
    if not getattr(spec.advection, "is_constant", False):
        slope = field_derivative(spec.advection, x, 1)
        if spec.mu != 0.0:
            slope = slope + spec.mu * field_derivative(spec.advection, x, 2)
    return -effective_diffusion(spec, x) * d2_phi + b * d_phi + slope * phi


def truncation_error(spec: ProblemSpec, exact: ScalarField, grid: Grid) -> np.ndarray:
    """
    tau_j = (L^h phi)(x_j) - (W^h L phi)(x_j) at the interior nodes.

    Derivatives come from the exact field when it is symbolic, otherwise
    from central differences.
    """
    x = grid.nodes
    stencil = build_stencil(spec, grid)
    flux_divergence = continuous_operator(spec, exact, x)
    return apply_difference_operator(stencil, evaluate_field(exact, x)) - apply_weighting_operator(
        stencil, flux_divergence
    )


def _solve_level(spec: ProblemSpec, h: float) -> tuple[float, int, float]:
    grid = grid_from_step(h)
    error = max_norm_error(solve(spec, grid.n_points), spec.exact)
    logger.debug(f"'{spec.name}' h={h:g} N={grid.n_points}: e_h={error:.3e}")
    return h, grid.n_points, error


def convergence_study(
    spec: ProblemSpec,
    h_list: Sequence[float] = tuple(CFS_H_LIST),
    max_workers: int | None = None,
    exactness_tol: float = CFS_EXACTNESS_TOL,
) -> ConvergenceReport:
    """
    Solve on each grid spacing and report the max-norm errors and orders.

    Args:
        spec: Problem with an exact solution.
        h_list: Grid spacings; each must give an integer N = 1/h + 1.
        max_workers: Solve the grids concurrently on this many threads.
        exactness_tol: Errors at or below this flag the report as exact.

    Returns:
        ConvergenceReport: rows sorted by decreasing h.

    Raises:
        ProblemDefinitionError: if the problem has no exact solution.
        GridError: if an h does not yield an integer number of points.
    """
    if spec.exact is None:
        raise ProblemDefinitionError(f"Problem '{spec.name}' has no exact solution to compare against")
    # Validate every step before solving anything
    for h in h_list:
        grid_from_step(h)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            levels = list(pool.map(lambda h: _solve_level(spec, h), h_list))
    else:
        levels = [_solve_level(spec, h) for h in h_list]

    report = ConvergenceReport.from_errors(spec.name, spec.epsilon, spec.mu, levels, exactness_tol)
    if report.exact_to_roundoff:
        logger.info(f"'{spec.name}' (eps={spec.epsilon:g}) is exact to roundoff on all {len(levels)} grids")
    elif report.lsq_slope is not None:
        logger.info(f"'{spec.name}' (eps={spec.epsilon:g}) least-squares order {report.lsq_slope:.3f}")
    return report
