"""
Built-in library of seven benchmark problems with closed-form solutions.

Every example is written in terms of the effective diffusion d = eps + mu*b
(constant b) so that a user-supplied shift keeps the exact solution valid.
Example 7 has variable advection; its source is manufactured symbolically
from the exact solution.
"""
import logging
from typing import Callable

import sympy as sp

from cfs.exceptions import ProblemDefinitionError
from cfs.problems.expressions import X, SymbolicField, constant_field
from cfs.problems.problem import ProblemSpec
from config.config import CFS_DEFAULT_EPSILON

logger = logging.getLogger("cfs.problems.examples")


def _num(value: float) -> sp.Float:
    return sp.Float(value, 17)


def _constant(expr: sp.Expr) -> float:
    return float(sp.N(expr, 30))


# =============================================================================
# Example builders
# =============================================================================

def _ex1(epsilon: float, mu: float) -> ProblemSpec:
    d = _num(epsilon + mu)
    exact = (1 - sp.exp(-(1 - X) / d)) / (1 - sp.exp(-1 / d))
    return ProblemSpec(
        name="ex1",
        epsilon=epsilon,
        mu=mu,
        advection=constant_field(1.0),
        phi_left=1.0,
        phi_right=0.0,
        exact=SymbolicField(exact),
        description=f"b=1, mu={mu:g}, q=0, phi(0)=1, phi(1)=0; outflow layer at x=1",
        default_n_points=101,
    )


def _ex2(epsilon: float, mu: float) -> ProblemSpec:
    d = _num(epsilon + mu)
    if d == 1:
        raise ProblemDefinitionError("Example ex2 is undefined for eps + mu = 1")
    bracket = (1 - sp.exp(1 - 1 / d) - (1 - sp.E) * sp.exp((X - 1) / d)) / (1 - sp.exp(-1 / d))
    exact = (sp.exp(X) - bracket) / (1 - d)
    return ProblemSpec(
        name="ex2",
        epsilon=epsilon,
        mu=mu,
        advection=constant_field(1.0),
        source=SymbolicField(sp.exp(X)),
        phi_left=0.0,
        phi_right=0.0,
        exact=SymbolicField(exact),
        description=f"b=1, mu={mu:g}, q=exp(x), homogeneous boundary values",
        default_n_points=301,
    )


def _ex3(epsilon: float, mu: float) -> ProblemSpec:
    d = _num(epsilon - mu)
    if d <= 0:
        raise ProblemDefinitionError(f"Example ex3 needs mu < eps, got eps={epsilon}, mu={mu}")
    root = sp.sqrt(1 + 4 * d)
    m1 = 2 / (1 + root)
    m2 = (-1 - root) / (2 * d)
    exact = ((1 - sp.exp(m2)) * sp.exp(m1 * X) + (sp.exp(m1) - 1) * sp.exp(m2 * X)) / (sp.exp(m1) - sp.exp(m2))
    return ProblemSpec(
        name="ex3",
        epsilon=epsilon,
        mu=mu,
        advection=constant_field(-1.0),
        reaction=constant_field(1.0),
        phi_left=1.0,
        phi_right=1.0,
        exact=SymbolicField(exact),
        description=f"b=-1, mu={mu:g}, c=1, q=0, phi(0)=phi(1)=1; layer at x=0",
        default_n_points=101,
    )


def _ex4(epsilon: float, mu: float) -> ProblemSpec:
    d = _num(epsilon + mu)
    rate = (1 + d) / d
    exact = sp.exp(rate * (X - 1)) + sp.exp(-X)
    return ProblemSpec(
        name="ex4",
        epsilon=epsilon,
        mu=mu,
        advection=constant_field(1.0),
        reaction=constant_field(_constant(1 + d)),
        phi_left=_constant(1 + sp.exp(-rate)),
        phi_right=_constant(1 + sp.exp(-1)),
        exact=SymbolicField(exact),
        description=f"b=1, mu={mu:g}, c=1+eps, q=0; layer at x=1",
        default_n_points=101,
    )


def _ex5(epsilon: float, mu: float) -> ProblemSpec:
    d = _num(epsilon - mu)
    if d <= 0:
        raise ProblemDefinitionError(f"Example ex5 needs mu < eps, got eps={epsilon}, mu={mu}")
    exact = X * (X + 1 - 2 * d) + (2 * d - 1) * (1 - sp.exp(-X / d)) / (1 - sp.exp(-1 / d))
    return ProblemSpec(
        name="ex5",
        epsilon=epsilon,
        mu=mu,
        advection=constant_field(-1.0),
        source=SymbolicField(-(1 + 2 * X)),
        phi_left=0.0,
        phi_right=1.0,
        exact=SymbolicField(exact),
        description=f"b=-1, mu={mu:g}, q=-(1+2x), phi(0)=0, phi(1)=1; layer at x=0",
        default_n_points=201,
    )


def _ex6(epsilon: float, mu: float) -> ProblemSpec:
    eps = _num(epsilon)
    exact = sp.exp(-X / sp.sqrt(eps)) + X
    return ProblemSpec(
        name="ex6",
        epsilon=epsilon,
        mu=mu,
        advection=constant_field(0.0),
        reaction=constant_field(1.0),
        source=SymbolicField(X),
        phi_left=1.0,
        phi_right=_constant(1 + sp.exp(-1 / sp.sqrt(eps))),
        exact=SymbolicField(exact),
        description="b=0, c=1, q=x, pure reaction-diffusion; layer at x=0",
        default_n_points=201,
    )


def _ex7(epsilon: float, mu: float) -> ProblemSpec:
    eps = _num(epsilon)
    b = 1 / (X + 1)
    c = 1 / (X + 2)
    # (x+1) * ((x+1)/2)^(1/eps) avoids 0 * inf for small eps
    exact = sp.exp(X) + (X + 1) * ((X + 1) / 2) ** (1 / eps)
    source = -(eps + _num(mu) * b) * sp.diff(exact, X, 2) + b * sp.diff(exact, X) + c * exact
    return ProblemSpec(
        name="ex7",
        epsilon=epsilon,
        mu=mu,
        advection=SymbolicField(b),
        reaction=SymbolicField(c),
        source=SymbolicField(source),
        phi_left=_constant(1 + sp.Integer(2) ** (-1 / eps)),
        phi_right=_constant(sp.E + 2),
        exact=SymbolicField(exact),
        description=f"b=1/(x+1), c=1/(x+2), mu={mu:g}, manufactured q; layer at x=1",
        default_n_points=201,
    )


# name -> (builder, default shift as a fraction of eps)
_LIBRARY: dict[str, tuple[Callable[[float, float], ProblemSpec], float]] = {
    "ex1": (_ex1, 0.1),
    "ex2": (_ex2, 0.0),
    "ex3": (_ex3, 0.2),
    "ex4": (_ex4, 0.0),
    "ex5": (_ex5, 0.0),
    "ex6": (_ex6, 0.0),
    "ex7": (_ex7, 0.0),
}

EXAMPLE_NAMES: tuple[str, ...] = tuple(_LIBRARY)


def get_example(name: str, epsilon: float | None = None, mu: float | None = None) -> ProblemSpec:
    """
    Build a built-in example by name.

    Args:
        name: One of ex1..ex7.
        epsilon: Perturbation parameter (defaults to CFS_DEFAULT_EPSILON).
        mu: Shift parameter; defaults to the example's own (0.1 eps for ex1,
            0.2 eps for ex3, 0 otherwise).

    Raises:
        ProblemDefinitionError: for an unknown name or invalid parameters.
    """
    if name not in _LIBRARY:
        raise ProblemDefinitionError(
            f"Unknown example '{name}'. Available: {', '.join(EXAMPLE_NAMES)}"
        )
    epsilon = CFS_DEFAULT_EPSILON if epsilon is None else float(epsilon)
    if epsilon <= 0:
        raise ProblemDefinitionError(f"epsilon must be positive, got {epsilon}")
    builder, shift_ratio = _LIBRARY[name]
    mu = shift_ratio * epsilon if mu is None else float(mu)
    if mu < 0:
        raise ProblemDefinitionError(f"mu must be non-negative, got {mu}")
    logger.debug(f"Building example {name} with eps={epsilon:g}, mu={mu:g}")
    return builder(epsilon, mu)


def builtin_examples(epsilon: float | None = None) -> list[ProblemSpec]:
    """All seven built-in examples, in order, at the given epsilon."""
    return [get_example(name, epsilon) for name in EXAMPLE_NAMES]
