"""
Coefficient expressions in x.

Fields written as text (problem files, the built-in library) are parsed with
sympy into ``SymbolicField`` objects: callables over numpy arrays that also
know their exact derivatives.
"""
import logging
import re
from functools import cached_property
from tokenize import TokenError
from typing import Callable

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from cfs.exceptions import ExpressionError

logger = logging.getLogger("cfs.problems.expressions")

X = sp.Symbol("x", real=True)
EPSILON = sp.Symbol("epsilon", positive=True)
MU = sp.Symbol("mu", nonnegative=True)

_FUNCTIONS = {
    "exp": sp.exp,
    "log": sp.log,
    "sqrt": sp.sqrt,
    "sin": sp.sin,
    "cos": sp.cos,
}
_CONSTANTS = {"pi": sp.pi, "e": sp.E}
_SYMBOLS = {"x": X, "epsilon": EPSILON, "mu": MU}
_ALLOWED_NAMES = set(_FUNCTIONS) | set(_CONSTANTS) | set(_SYMBOLS)

_TRANSFORMATIONS = standard_transformations + (convert_xor,)
_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
# Digits, operators, parentheses, decimal points, exponents and whitespace
_ALLOWED_CHARS = re.compile(r"^[A-Za-z_0-9+\-*/^().\s]*$")


class SymbolicField:
    """
    A scalar field phi(x) backed by a sympy expression.

    Calling the field evaluates it on a float or numpy array and always
    returns an array of the input's shape, even for constant expressions.
    """

    def __init__(self, expr: sp.Expr, source: str | None = None):
        free = expr.free_symbols - {X}
        if free:
            names = ", ".join(sorted(str(s) for s in free))
            raise ExpressionError(f"Field has unresolved symbols: {names}")
        self.expr = expr
        self.source = source if source is not None else str(expr)

    @cached_property
    def _func(self) -> Callable:
        return sp.lambdify(X, self.expr, modules="numpy")

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        with np.errstate(over="ignore", under="ignore"):
            values = np.asarray(self._func(x_arr), dtype=float)
        return np.broadcast_to(values, x_arr.shape).copy()

    def derivative(self, order: int = 1) -> "SymbolicField":
        """Return the exact derivative of the given order as a new field."""
        return SymbolicField(sp.diff(self.expr, X, order))

    @property
    def is_constant(self) -> bool:
        return X not in self.expr.free_symbols

    def __repr__(self) -> str:
        return f"SymbolicField({self.source!r})"


def _check_tokens(text: str) -> None:
    if not _ALLOWED_CHARS.match(text):
        raise ExpressionError(f"Expression contains unsupported characters: {text!r}")
    # Strip numeric literals like 1e-3 before scanning identifiers
    stripped = re.sub(r"\d+\.?\d*(?:[eE][+-]?\d+)?", " ", text)
    for name in _IDENTIFIER.findall(stripped):
        if name not in _ALLOWED_NAMES:
            raise ExpressionError(
                f"Unknown name '{name}' in expression {text!r}. "
                f"Allowed: {', '.join(sorted(_ALLOWED_NAMES))}"
            )


def parse_expression(text: str, epsilon: float | None = None, mu: float | None = None) -> sp.Expr:
    """
    Parse an arithmetic expression in x into a sympy expression.

    Supports + - * / ^ and parentheses, the functions exp, log, sqrt, sin,
    cos, the constants pi and e, and the parameters epsilon and mu, which are
    substituted when values are given.

    Raises:
        ExpressionError: on unknown names, bad syntax or empty input.
    """
    if text is None or not str(text).strip():
        raise ExpressionError("Empty expression")
    text = str(text).strip()
    _check_tokens(text)

    local_dict = {**_FUNCTIONS, **_CONSTANTS, **_SYMBOLS}
    try:
        expr = parse_expr(text, local_dict=local_dict, transformations=_TRANSFORMATIONS, evaluate=True)
    except (SyntaxError, TypeError, ValueError, AttributeError, TokenError, sp.SympifyError) as e:
        raise ExpressionError(f"Could not parse expression {text!r}: {e}") from e

    substitutions = {}
    if epsilon is not None:
        substitutions[EPSILON] = sp.Float(epsilon, 17)
    if mu is not None:
        substitutions[MU] = sp.Float(mu, 17)
    if substitutions:
        expr = expr.subs(substitutions)
    logger.debug(f"Parsed expression {text!r} -> {expr}")
    return expr


def parse_field(text: str, epsilon: float | None = None, mu: float | None = None) -> SymbolicField:
    """Parse ``text`` into a callable field of x."""
    return SymbolicField(parse_expression(text, epsilon, mu), source=str(text).strip())


def parse_constant(text: str, epsilon: float | None = None, mu: float | None = None) -> float:
    """Parse an expression that must reduce to a number (e.g. a boundary value)."""
    expr = parse_expression(text, epsilon, mu)
    if expr.free_symbols:
        names = ", ".join(sorted(str(s) for s in expr.free_symbols))
        raise ExpressionError(f"Expected a constant, {text!r} depends on {names}")
    try:
        value = float(expr)
    except TypeError as e:
        # zoo and complex results
        raise ExpressionError(f"Constant {text!r} is not a real number") from e
    if not np.isfinite(value):
        raise ExpressionError(f"Constant {text!r} is not finite")
    return value


def constant_field(value: float) -> SymbolicField:
    """A field that is the same number everywhere."""
    return SymbolicField(sp.Float(value, 17))
