"""
Continuous problem definition and the uniform grid.

The solver works on the shift-to-diffusion approximation of the
differential-difference equation on (0, 1):

    -(eps + mu b) phi'' + b phi' + c phi = q + g(x, phi),
    phi(0) = phi_L, phi(1) = phi_R,

where g is an optional nonlinear source hook.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from cfs.exceptions import GridError, ProblemDefinitionError
from cfs.problems.expressions import constant_field
from config.config import CFS_DEFAULT_N_POINTS, CFS_VALIDATION_SAMPLES

logger = logging.getLogger("cfs.problems.problem")

ScalarField = Callable[[np.ndarray], np.ndarray]
NonlinearSource = Callable[[np.ndarray, np.ndarray], np.ndarray]

# Central-difference steps used when a field has no exact derivative
FD_STEP_FIRST = 1e-6
FD_STEP_SECOND = 1e-4


def _zero_field() -> ScalarField:
    return constant_field(0.0)


class ProblemSpec(BaseModel):
    """
    A singularly perturbed boundary value problem on (0, 1).

    Coefficient fields are vectorised callables of x. The effective diffusion
    eps + mu*b(x) is checked to be positive on a dense sample at construction.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = Field(..., description="Identifier of the problem (e.g. 'ex1')")
    epsilon: float = Field(..., gt=0, description="Singular perturbation parameter, 0 < eps << 1")
    mu: float = Field(0.0, ge=0, description="Shift parameter of the delayed advection term, O(eps)")
    advection: ScalarField = Field(..., description="Advection coefficient b(x)")
    reaction: ScalarField = Field(default_factory=_zero_field, description="Reaction coefficient c(x)")
    source: ScalarField = Field(default_factory=_zero_field, description="phi-independent source q(x)")
    phi_left: float = Field(..., description="Boundary value phi(0)")
    phi_right: float = Field(..., description="Boundary value phi(1)")
    exact: Optional[ScalarField] = Field(None, description="Closed-form reference solution, if known")
    nonlinear_source: Optional[NonlinearSource] = Field(
        None, description="Optional extra source g(x, phi), resolved by fixed-point iteration"
    )
    description: str = Field("", description="One-line parameter summary")
    default_n_points: int = Field(CFS_DEFAULT_N_POINTS, ge=3, description="Grid size adequate for demonstration runs")

    @model_validator(mode="after")
    def _check_effective_diffusion(self) -> "ProblemSpec":
        if not (np.isfinite(self.phi_left) and np.isfinite(self.phi_right)):
            raise ProblemDefinitionError(f"Problem '{self.name}': boundary values must be finite")
        x = np.linspace(0.0, 1.0, CFS_VALIDATION_SAMPLES)
        diffusion = effective_diffusion(self, x)
        if not np.all(np.isfinite(diffusion)) or np.any(diffusion <= 0.0):
            worst = int(np.nanargmin(diffusion)) if np.any(np.isfinite(diffusion)) else 0
            raise ProblemDefinitionError(
                f"Problem '{self.name}': effective diffusion eps + mu*b must be positive on [0, 1], "
                f"found {diffusion[worst]:.3e} at x = {x[worst]:.4f}"
            )
        return self


@dataclass(frozen=True)
class Grid:
    """Uniform grid on [0, 1] with N nodes and N-1 interfaces."""
    n_points: int
    h: float
    nodes: np.ndarray
    interfaces: np.ndarray

    @property
    def n_interior(self) -> int:
        return self.n_points - 2


def evaluate_field(field: ScalarField, x) -> np.ndarray:
    """Evaluate a field and broadcast constant results to the shape of x."""
    x_arr = np.asarray(x, dtype=float)
    values = np.asarray(field(x_arr), dtype=float)
    return np.broadcast_to(values, x_arr.shape).astype(float)


def field_derivative(field: ScalarField, x, order: int = 1) -> np.ndarray:
    """
    Derivative of a field at x.

    Uses the field's own ``derivative`` when it has one (symbolic fields),
    otherwise central differences.
    """
    if hasattr(field, "derivative"):
        return evaluate_field(field.derivative(order), x)
    x_arr = np.asarray(x, dtype=float)
    if order == 1:
        step = FD_STEP_FIRST
        return (evaluate_field(field, x_arr + step) - evaluate_field(field, x_arr - step)) / (2.0 * step)
    if order == 2:
        step = FD_STEP_SECOND
        return (
            evaluate_field(field, x_arr + step) - 2.0 * evaluate_field(field, x_arr) + evaluate_field(field, x_arr - step)
        ) / step**2
    raise ValueError(f"Unsupported derivative order {order}")


def effective_diffusion(spec: ProblemSpec, x):
    """
    Effective diffusion eps + mu*b(x) of the approximate problem.

    Returns a float for scalar x, an array otherwise.
    """
    values = spec.epsilon + spec.mu * evaluate_field(spec.advection, x)
    if np.ndim(x) == 0:
        return float(values)
    return values


def conservative_advection(spec: ProblemSpec, x) -> np.ndarray:
    """
    Advection of the conservation form, b + mu*b'.

    -(eps + mu b) phi'' + b phi' equals (b^ phi - (eps + mu b) phi')' - b^' phi
    with b^ = b + mu b'. For constant b (or mu = 0) this is just b.
    """
    b = evaluate_field(spec.advection, x)
    if spec.mu == 0.0:
        return b
    return b + spec.mu * field_derivative(spec.advection, x, 1)


def conservative_reaction(spec: ProblemSpec, x) -> np.ndarray:
    """Reaction of the conservation form, c - (b + mu*b')'."""
    c = evaluate_field(spec.reaction, x)
    if getattr(spec.advection, "is_constant", False):
        return c
    slope = field_derivative(spec.advection, x, 1)
    if spec.mu != 0.0:
        slope = slope + spec.mu * field_derivative(spec.advection, x, 2)
    return c - slope


def peclet_density(spec: ProblemSpec, x) -> np.ndarray:
    """lambda(x) = b^(x) / (eps + mu*b(x))."""
    return conservative_advection(spec, x) / effective_diffusion(spec, np.asarray(x, dtype=float))


def make_grid(n_points: int) -> Grid:
    """
    Build the uniform grid x_j = (j-1)h, h = 1/(N-1), with interface midpoints.

    Raises:
        GridError: if n_points < 3.
    """
    if int(n_points) != n_points or n_points < 3:
        raise GridError(f"A grid needs at least 3 integer points, got {n_points}")
    n_points = int(n_points)
    nodes = np.linspace(0.0, 1.0, n_points)
    interfaces = 0.5 * (nodes[:-1] + nodes[1:])
    return Grid(n_points=n_points, h=1.0 / (n_points - 1), nodes=nodes, interfaces=interfaces)


def grid_from_step(h: float, rel_tol: float = 1e-9) -> Grid:
    """
    Build the grid whose spacing is h.

    Raises:
        GridError: if 1/h is not (within rel_tol) an integer.
    """
    if h <= 0 or not np.isfinite(h):
        raise GridError(f"Grid step must be positive and finite, got {h}")
    cells = 1.0 / h
    n_cells = round(cells)
    if n_cells < 2 or abs(cells - n_cells) > rel_tol * cells:
        raise GridError(f"h = {h} does not give an integer number of points (1/h = {cells})")
    return make_grid(n_cells + 1)
