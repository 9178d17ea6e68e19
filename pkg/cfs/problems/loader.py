"""
Load a problem definition from a plain-text key-value file.

Example file::

    name=layer
    epsilon=1e-3
    mu=0.1*epsilon
    b=1
    c=0
    q=exp(x)
    phi_left=0
    phi_right=0

Coefficients are arithmetic expressions in x; ``epsilon`` and ``mu`` may be
referenced and are substituted before evaluation.
"""
import logging
from pathlib import Path

from dotenv import dotenv_values
from pydantic import ValidationError

from cfs.exceptions import ProblemDefinitionError
from cfs.problems.expressions import parse_constant, parse_field
from cfs.problems.problem import ProblemSpec
from config.config import CFS_DEFAULT_EPSILON, CFS_DEFAULT_N_POINTS

logger = logging.getLogger("cfs.problems.loader")

REQUIRED_KEYS = ("b", "phi_left", "phi_right")
OPTIONAL_KEYS = ("name", "description", "epsilon", "mu", "c", "q", "exact", "n_points")
ALLOWED_KEYS = frozenset(REQUIRED_KEYS + OPTIONAL_KEYS)


def load_problem(path: str | Path, epsilon: float | None = None, mu: float | None = None) -> ProblemSpec:
    """
    Parse a key-value problem file into a ProblemSpec.

    Args:
        path: File with one ``key=value`` per line (``#`` comments allowed).
        epsilon: Overrides the file's epsilon when given.
        mu: Overrides the file's mu when given.

    Returns:
        ProblemSpec: The validated problem.

    Raises:
        ProblemDefinitionError: if the file is missing, has unknown or missing
            keys, or any value fails to parse.
    """
    path = Path(path)
    if not path.is_file():
        raise ProblemDefinitionError(f"Problem file not found: {path}")

    values = {key.strip().lower(): value for key, value in dotenv_values(path).items()}
    unknown = sorted(set(values) - ALLOWED_KEYS)
    if unknown:
        raise ProblemDefinitionError(
            f"{path}: unknown keys {', '.join(unknown)}. Allowed: {', '.join(sorted(ALLOWED_KEYS))}"
        )
    missing = [key for key in REQUIRED_KEYS if not values.get(key)]
    if missing:
        raise ProblemDefinitionError(f"{path}: missing required keys {', '.join(missing)}")

    if epsilon is None:
        epsilon = parse_constant(values["epsilon"]) if values.get("epsilon") else CFS_DEFAULT_EPSILON
    if mu is None:
        mu = parse_constant(values["mu"], epsilon=epsilon) if values.get("mu") else 0.0

    def field(key: str, default: str = "0"):
        return parse_field(values.get(key) or default, epsilon=epsilon, mu=mu)

    n_points = values.get("n_points")
    try:
        n_points = int(n_points) if n_points else CFS_DEFAULT_N_POINTS
    except ValueError as e:
        raise ProblemDefinitionError(f"{path}: n_points must be an integer, got {n_points!r}") from e

    try:
        spec = ProblemSpec(
            name=values.get("name") or path.stem,
            description=values.get("description") or f"loaded from {path.name}",
            epsilon=epsilon,
            mu=mu,
            advection=field("b"),
            reaction=field("c"),
            source=field("q"),
            phi_left=parse_constant(values["phi_left"], epsilon=epsilon, mu=mu),
            phi_right=parse_constant(values["phi_right"], epsilon=epsilon, mu=mu),
            exact=field("exact") if values.get("exact") else None,
            default_n_points=n_points,
        )
    except ValidationError as e:
        raise ProblemDefinitionError(f"{path}: invalid problem definition: {e}") from e

    logger.info(f"Loaded problem file {path} (eps={epsilon:g}, mu={mu:g})")
    return spec
