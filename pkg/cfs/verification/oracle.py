"""
Integral representation of the interface flux, evaluated by quadrature.

On a cell [x_j, x_{j+1}] with midpoint m the exact flux is

    f = ( phi_j e^{-Lambda_j} - phi_{j+1} e^{-Lambda_{j+1}} ) / I_0  -  I_S / I_0
    I_0 = int d^-1 e^{-Lambda} dx,   I_S = int d^-1 e^{-Lambda} S dx

with Lambda(x) = int_m^x lambda and S(x) = int_m^x s. The outer integrals use
adaptive Gauss-Kronrod (scipy.integrate.quad) split at m; Lambda and S use a
fixed Gauss-Legendre rule, which is exact to rounding on such short ranges.
"""
import logging
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.special import roots_legendre

from cfs.exceptions import QuadratureError
from cfs.problems.problem import Grid, ProblemSpec, conservative_reaction, effective_diffusion, evaluate_field, peclet_density
from cfs.scheme.flux import check_interface
from cfs.scheme.special_functions import green_flux
from config.config import CFS_QUAD_TOL

logger = logging.getLogger("cfs.verification.oracle")

INNER_NODES = 32
QUAD_LIMIT = 200
# quad may flag a roundoff plateau below its target; accept errors up to this factor
TOLERANCE_SLACK = 1e3

_GL_NODES, _GL_WEIGHTS = roots_legendre(INNER_NODES)


def _running_integral(func: Callable[[np.ndarray], np.ndarray], start: float, x) -> np.ndarray:
    """int_start^x func(xi) dxi for each x, by Gauss-Legendre."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    half = 0.5 * (x - start)
    points = start + half[:, None] * (_GL_NODES[None, :] + 1.0)
    values = func(points.ravel()).reshape(points.shape)
    return half * (values @ _GL_WEIGHTS)


def _quad(func: Callable[[float], float], a: float, b: float, tol: float, label: str) -> float:
    result = integrate.quad(func, a, b, epsabs=tol, epsrel=tol, limit=QUAD_LIMIT, full_output=1)
    value, abserr = result[0], result[1]
    if len(result) > 3 and abserr > TOLERANCE_SLACK * tol * max(1.0, abs(value)):
        raise QuadratureError(
            f"Quadrature of {label} on [{a:.6g}, {b:.6g}] reached only {abserr:.3e}: {result[3]}",
            achieved=abserr,
        )
    return value


def _split_quad(func: Callable[[float], float], a: float, m: float, b: float, tol: float, label: str) -> float:
    return _quad(func, a, m, tol, label) + _quad(func, m, b, tol, label)


def flux_oracle(
    spec: ProblemSpec,
    grid: Grid,
    j: int,
    phi_left: float,
    phi_right: float,
    tol: float = CFS_QUAD_TOL,
) -> tuple[float, float]:
    """
    Homogeneous and inhomogeneous parts of the exact flux through interface j.

    The source inside the cell is q - c_eff phi, with phi the linear
    interpolant of the two nodal values.

    Args:
        spec: The problem.
        grid: Grid whose interface j (between nodes j and j+1) is evaluated.
        phi_left: phi at node j.
        phi_right: phi at node j+1.
        tol: Absolute and relative target of the outer quadratures.

    Returns:
        (f_h, f_i)

    Raises:
        QuadratureError: if an outer quadrature misses its tolerance.
    """
    check_interface(grid, j)
    a, b = float(grid.nodes[j]), float(grid.nodes[j + 1])
    m = float(grid.interfaces[j])

    def lam(x):
        return peclet_density(spec, x)

    def phi_interp(x):
        return phi_left + (phi_right - phi_left) * (x - a) / (b - a)

    def source(x):
        phi = phi_interp(x)
        s = evaluate_field(spec.source, x) - conservative_reaction(spec, x) * phi
        if spec.nonlinear_source is not None:
            s = s + np.asarray(spec.nonlinear_source(x, phi), dtype=float)
        return s

    lam_ends = _running_integral(lam, m, [a, b])
    # Shift so that the largest e^{-Lambda} on the cell is O(1)
    shift = float(min(lam_ends.min(), 0.0))

    def kernel(x: float) -> float:
        big_lambda = _running_integral(lam, m, x)[0]
        return float(np.exp(-(big_lambda - shift)) / effective_diffusion(spec, x))

    def kernel_source(x: float) -> float:
        return kernel(x) * float(_running_integral(source, m, x)[0])

    i_0 = _split_quad(kernel, a, m, b, tol, "d^-1 e^-Lambda")
    i_s = _split_quad(kernel_source, a, m, b, tol, "d^-1 e^-Lambda S")
    e_left = np.exp(-(lam_ends[0] - shift))
    e_right = np.exp(-(lam_ends[1] - shift))

    f_h = float((phi_left * e_left - phi_right * e_right) / i_0)
    f_i = float(-i_s / i_0)
    logger.debug(f"Flux oracle '{spec.name}' interface {j}: f_h={f_h:.12g}, f_i={f_i:.12g}")
    return f_h, f_i


def green_inhomogeneous_flux(
    peclet: float,
    source: float | Callable[[float], float],
    h: float,
    tol: float = CFS_QUAD_TOL,
) -> float:
    """
    Inhomogeneous flux h * int_0^1 G(sigma; P) s(sigma) dsigma.

    Args:
        peclet: Cell Peclet number P.
        source: Constant source, or s as a function of sigma in [0, 1].
        h: Cell width.
        tol: Quadrature tolerance.
    """
    s = source if callable(source) else (lambda sigma: source)

    def left(sigma: float) -> float:
        return green_flux(sigma, peclet, side="left") * s(sigma)

    def right(sigma: float) -> float:
        return green_flux(sigma, peclet, side="right") * s(sigma)

    total = _quad(left, 0.0, 0.5, tol, "G s (left)") + _quad(right, 0.5, 1.0, tol, "G s (right)")
    return h * total
