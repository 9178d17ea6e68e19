"""
CSV and JSON plot data for solution profiles and convergence reports.

Tables are columnar: an ordered mapping of column name to values. CSV uses a
header row, comma delimiter, LF line endings and 17 significant digits; JSON
holds one array per column under the same names. Files are written to a
temporary file in the target directory and renamed into place.
"""
import csv
import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from cfs.problems.problem import ProblemSpec, evaluate_field
from cfs.scheme.assembly import Solution
from cfs.verification.models import ConvergenceReport

logger = logging.getLogger("cfs.verification.reporting")

Table = Mapping[str, Sequence]

REPORT_COLUMNS = ("problem", "epsilon", "mu", "h", "n_points", "max_error", "observed_order")
FORMATS = ("csv", "json")


# =============================================================================
# Tables
# =============================================================================

def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _json_cell(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def table_to_csv(table: Table) -> str:
    columns = list(table)
    lengths = {len(table[name]) for name in columns}
    if len(lengths) > 1:
        raise ValueError(f"Columns of unequal length: { {name: len(table[name]) for name in columns} }")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in zip(*(table[name] for name in columns)):
        writer.writerow([_format_cell(value) for value in row])
    return buffer.getvalue()


def table_to_json(table: Table) -> str:
    payload = {name: [_json_cell(value) for value in values] for name, values in table.items()}
    return json.dumps(payload, indent=2) + "\n"


def render_table(table: Table, fmt: str = "csv") -> str:
    if fmt == "csv":
        return table_to_csv(table)
    if fmt == "json":
        return table_to_json(table)
    raise ValueError(f"Unknown output format '{fmt}', expected one of {', '.join(FORMATS)}")


def write_atomic(path: str | Path, text: str) -> Path:
    """Write text to path through a temporary file and an atomic rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_file = tempfile.NamedTemporaryFile(
        mode="w",
        dir=path.parent,
        prefix=f".{path.name}.",
        suffix=".tmp",
        newline="",
        encoding="utf-8",
        delete=False,
    )
    try:
        with temp_file:
            temp_file.write(text)
        os.replace(temp_file.name, path)
    except BaseException:
        Path(temp_file.name).unlink(missing_ok=True)
        raise
    logger.info(f"Wrote {path}")
    return path


# =============================================================================
# Profiles and reports
# =============================================================================

def profile_table(spec: ProblemSpec, solution: Solution) -> dict[str, list]:
    """x, phi_numeric and, with an exact solution, phi_exact and abs_error."""
    x = solution.grid.nodes
    table = {"x": x.tolist(), "phi_numeric": solution.values.tolist()}
    if spec.exact is not None:
        exact = evaluate_field(spec.exact, x)
        table["phi_exact"] = exact.tolist()
        table["abs_error"] = np.abs(solution.values - exact).tolist()
    return table


def sweep_table(profiles: Sequence[tuple[ProblemSpec, Solution]]) -> dict[str, list]:
    """Long-format table of several profiles, keyed by epsilon."""
    tables = [profile_table(spec, solution) for spec, solution in profiles]
    columns = ["epsilon"] + list(tables[0]) if tables else ["epsilon", "x", "phi_numeric"]
    if any(list(table) != columns[1:] for table in tables):
        raise ValueError("All profiles of a sweep must carry the same columns")
    out: dict[str, list] = {name: [] for name in columns}
    for (spec, _), table in zip(profiles, tables):
        out["epsilon"].extend([spec.epsilon] * len(table["x"]))
        for name in columns[1:]:
            out[name].extend(table[name])
    return out


def report_table(report: ConvergenceReport) -> dict[str, list]:
    rows = report.rows
    return {
        "problem": [report.problem_name] * len(rows),
        "epsilon": [report.epsilon] * len(rows),
        "mu": [report.mu] * len(rows),
        "h": [row.h for row in rows],
        "n_points": [row.n_points for row in rows],
        "max_error": [row.max_error for row in rows],
        "observed_order": [row.observed_order for row in rows],
    }


def write_table(table: Table, path: str | Path, fmt: str = "csv") -> Path:
    return write_atomic(path, render_table(table, fmt))


# =============================================================================
# Readers
# =============================================================================

def _optional_float(text: str) -> float | None:
    return float(text) if text != "" else None


def _report_from_columns(columns: Mapping[str, Sequence]) -> ConvergenceReport:
    missing = [name for name in REPORT_COLUMNS if name not in columns]
    if missing:
        raise ValueError(f"Report is missing columns: {', '.join(missing)}")
    names = set(columns["problem"])
    if len(names) != 1:
        raise ValueError(f"A report holds exactly one problem, found {sorted(names)}")
    levels = [
        (float(h), int(n), float(e))
        for h, n, e in zip(columns["h"], columns["n_points"], columns["max_error"])
    ]
    return ConvergenceReport.from_errors(
        problem_name=columns["problem"][0],
        epsilon=float(columns["epsilon"][0]),
        mu=float(columns["mu"][0]),
        levels=levels,
    )


def read_report_csv(path: str | Path) -> ConvergenceReport:
    """Parse a report CSV back into a ConvergenceReport (orders are recomputed)."""
    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    columns = {name: [row[name] for row in rows] for name in (rows[0] if rows else REPORT_COLUMNS)}
    return _report_from_columns(columns)


def read_report_json(path: str | Path) -> ConvergenceReport:
    """Parse a report JSON back into a ConvergenceReport (orders are recomputed)."""
    with open(path, encoding="utf-8") as handle:
        return _report_from_columns(json.load(handle))


def read_profile_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Parse a profile or sweep CSV into float arrays keyed by column."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        rows = list(reader)
        names = reader.fieldnames or []
    return {name: np.array([_optional_float(row[name]) for row in rows], dtype=float) for name in names}
