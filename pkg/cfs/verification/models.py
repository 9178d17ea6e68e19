"""
Pydantic models of convergence studies.
"""
import math
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from config.config import CFS_EXACTNESS_TOL


class ConvergenceRow(BaseModel):
    """One grid level of a convergence study."""
    h: float = Field(..., gt=0, description="Grid spacing")
    n_points: int = Field(..., ge=3, description="Number of grid nodes, 1/h + 1")
    max_error: float = Field(..., ge=0, description="Max-norm error against the exact solution")
    observed_order: Optional[float] = Field(
        None, description="log(e_prev/e)/log(h_prev/h) against the previous (coarser) row; absent for the first row"
    )


class ConvergenceReport(BaseModel):
    """Errors of one problem over a list of grids, coarsest first."""
    problem_name: str = Field(..., description="Identifier of the problem")
    epsilon: float = Field(..., description="Singular perturbation parameter")
    mu: float = Field(..., description="Shift parameter")
    rows: List[ConvergenceRow] = Field(default_factory=list, description="Grid levels sorted by decreasing h")
    lsq_slope: Optional[float] = Field(
        None, description="Least-squares slope of log(max_error) against log(h); absent when exact to roundoff"
    )
    exact_to_roundoff: bool = Field(False, description="All errors are below the exactness tolerance")

    @model_validator(mode="after")
    def _check_order(self) -> "ConvergenceReport":
        steps = [row.h for row in self.rows]
        if any(a <= b for a, b in zip(steps, steps[1:])):
            raise ValueError(f"Rows must be sorted by strictly decreasing h, got {steps}")
        return self

    @classmethod
    def from_errors(
        cls,
        problem_name: str,
        epsilon: float,
        mu: float,
        levels: list[tuple[float, int, float]],
        exactness_tol: float = CFS_EXACTNESS_TOL,
    ) -> "ConvergenceReport":
        """
        Build a report from (h, n_points, max_error) triples in any order.

        Pairwise orders and the least-squares slope are derived here. When
        every error is at or below ``exactness_tol`` the report is flagged
        exact and carries neither.
        """
        levels = sorted(levels, key=lambda level: level[0], reverse=True)
        exact = bool(levels) and all(error <= exactness_tol for _, _, error in levels)

        rows: list[ConvergenceRow] = []
        for i, (h, n_points, error) in enumerate(levels):
            order = None
            if i > 0 and not exact:
                h_prev, _, e_prev = levels[i - 1]
                if error > 0 and e_prev > 0:
                    order = math.log(e_prev / error) / math.log(h_prev / h)
            rows.append(ConvergenceRow(h=h, n_points=n_points, max_error=error, observed_order=order))

        slope = None
        positive = [(h, e) for h, _, e in levels if e > 0]
        if not exact and len(positive) >= 2:
            log_h = np.log([h for h, _ in positive])
            log_e = np.log([e for _, e in positive])
            slope = float(np.polyfit(log_h, log_e, 1)[0])

        return cls(
            problem_name=problem_name,
            epsilon=epsilon,
            mu=mu,
            rows=rows,
            lsq_slope=slope,
            exact_to_roundoff=exact,
        )
