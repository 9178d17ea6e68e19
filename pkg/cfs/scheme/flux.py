"""
Interface Peclet data, quadrature coefficients and numerical fluxes.

Interfaces are indexed from 0: interface j sits between nodes j and j+1 of
the grid (x_{j+1/2} in the usual notation). The per-interface operations
index into the vectorised ``*_all`` variants, which the assembly uses.
"""
import logging
from dataclasses import dataclass

import numpy as np

from cfs.exceptions import AssemblyError, DomainError, ProblemDefinitionError
from cfs.problems.problem import Grid, ProblemSpec, effective_diffusion, evaluate_field, peclet_density
from cfs.scheme.special_functions import bernoulli, weight

logger = logging.getLogger("cfs.scheme.flux")


@dataclass(frozen=True)
class PecletData:
    """Peclet data of one interface (floats) or of all interfaces (arrays)."""
    lambda_left: float | np.ndarray
    lambda_right: float | np.ndarray
    lambda_bar: float | np.ndarray
    p_bar: float | np.ndarray
    lambda_tilde: float | np.ndarray
    eps_tilde: float | np.ndarray
    eps_interface: float | np.ndarray
    b_bar: float | np.ndarray

    def at(self, j: int) -> "PecletData":
        """Select interface j from a vectorised instance."""
        return PecletData(**{name: float(np.asarray(value)[j]) for name, value in self.__dict__.items()})


@dataclass(frozen=True)
class InterfaceCoefficients:
    """Coefficients of the flux F = alpha phi_j - beta phi_{j+1} + h (gamma s_j + delta s_{j+1})."""
    alpha: float | np.ndarray
    beta: float | np.ndarray
    gamma: float | np.ndarray
    delta: float | np.ndarray

    def at(self, j: int) -> "InterfaceCoefficients":
        return InterfaceCoefficients(**{name: float(np.asarray(value)[j]) for name, value in self.__dict__.items()})


# =============================================================================
# Peclet data
# =============================================================================

def interface_peclet_all(spec: ProblemSpec, grid: Grid) -> PecletData:
    """
    Peclet data for every interface of the grid.

    lambda is averaged with the trapezoidal rule, lambda~ and the diffusion
    with the exponentially weighted average W(-P)v_j + W(P)v_{j+1}, and the
    interface diffusion is (lambda~/lambda_bar) * eps~. Where lambda_bar is
    exactly zero the interface diffusion is the arithmetic mean.

    Raises:
        ProblemDefinitionError: if eps + mu*b <= 0 at a node.
        AssemblyError: if an interface diffusion is not positive.
    """
    x = grid.nodes
    diffusion = effective_diffusion(spec, x)
    if np.any(diffusion <= 0.0):
        node = int(np.argmin(diffusion))
        raise ProblemDefinitionError(
            f"Effective diffusion {diffusion[node]:.3e} <= 0 at node {node} (x = {x[node]:.6g})"
        )
    lam = peclet_density(spec, x)
    b = evaluate_field(spec.advection, x)

    lam_left, lam_right = lam[:-1], lam[1:]
    d_left, d_right = diffusion[:-1], diffusion[1:]
    lam_bar = 0.5 * (lam_left + lam_right)
    p_bar = grid.h * lam_bar

    w_upstream = weight(-p_bar)
    w_downstream = weight(p_bar)
    lam_tilde = w_upstream * lam_left + w_downstream * lam_right
    eps_tilde = w_upstream * d_left + w_downstream * d_right

    ratio = np.divide(lam_tilde, lam_bar, out=np.ones_like(lam_bar), where=lam_bar != 0.0)
    eps_interface = np.where(lam_bar != 0.0, ratio * eps_tilde, 0.5 * (d_left + d_right))

    bad = np.flatnonzero(~(eps_interface > 0.0))
    if bad.size:
        j = int(bad[0])
        raise AssemblyError(
            f"Interface diffusion {eps_interface[j]:.3e} is not positive at interface {j} "
            f"(x = {grid.interfaces[j]:.6g}); refine the grid",
            row=j,
        )

    return PecletData(
        lambda_left=lam_left,
        lambda_right=lam_right,
        lambda_bar=lam_bar,
        p_bar=p_bar,
        lambda_tilde=lam_tilde,
        eps_tilde=eps_tilde,
        eps_interface=eps_interface,
        b_bar=0.5 * (b[:-1] + b[1:]),
    )


def interface_peclet(spec: ProblemSpec, grid: Grid, j: int) -> PecletData:
    """Peclet data of interface j (0 <= j <= N-2)."""
    check_interface(grid, j)
    return interface_peclet_all(spec, grid).at(j)


def check_interface(grid: Grid, j: int) -> None:
    if not 0 <= j <= grid.n_points - 2:
        raise DomainError(f"Interface index {j} outside [0, {grid.n_points - 2}]")


# =============================================================================
# Coefficients and fluxes
# =============================================================================

def interface_coefficients_all(pd: PecletData, h: float) -> InterfaceCoefficients:
    """
    alpha, beta, gamma, delta for every entry of (vectorised) Peclet data.

    The source weight 1/2 - W(P) goes to the upwind node: gamma when
    b_bar >= 0, delta otherwise.
    """
    p_bar = np.asarray(pd.p_bar, dtype=float)
    scale = np.asarray(pd.eps_interface, dtype=float) / h
    source_weight = 0.5 - weight(p_bar)
    from_left = np.asarray(pd.b_bar, dtype=float) >= 0.0
    return InterfaceCoefficients(
        alpha=scale * bernoulli(-p_bar),
        beta=scale * bernoulli(p_bar),
        gamma=np.where(from_left, source_weight, 0.0),
        delta=np.where(from_left, 0.0, source_weight),
    )


def interface_coefficients(pd: PecletData, h: float) -> InterfaceCoefficients:
    """
    Quadrature coefficients of one interface.

    Args:
        pd: Peclet data of the interface.
        h: Grid spacing, h > 0.

    Returns:
        InterfaceCoefficients with float fields.
    """
    if h <= 0:
        raise DomainError(f"h must be positive, got {h}")
    ic = interface_coefficients_all(pd, h)
    return InterfaceCoefficients(
        alpha=float(ic.alpha), beta=float(ic.beta), gamma=float(ic.gamma), delta=float(ic.delta)
    )


def numerical_flux(ic: InterfaceCoefficients, phi_left, phi_right, s_left, s_right, h: float):
    """F = alpha phi_left - beta phi_right + h (gamma s_left + delta s_right)."""
    return ic.alpha * phi_left - ic.beta * phi_right + h * (ic.gamma * s_left + ic.delta * s_right)


def homogeneous_flux_const(eps_mu_b: float, h: float, P: float, phi_left: float, phi_right: float) -> float:
    """Constant-coefficient homogeneous flux (d/h) [B(-P) phi_left - B(P) phi_right]."""
    return eps_mu_b / h * (bernoulli(-P) * phi_left - bernoulli(P) * phi_right)


def inhomogeneous_flux_const(P: float, s_upwind: float, h: float) -> float:
    """Constant-coefficient inhomogeneous flux (1/2 - W(P)) s_upwind h."""
    return (0.5 - weight(P)) * s_upwind * h
