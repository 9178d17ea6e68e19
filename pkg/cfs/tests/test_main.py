"""
Command-line interface tests.

Usage:
    pytest cfs/tests/test_main.py -v
"""
import csv
import io
import json
import logging
import math

import pytest
from click.testing import CliRunner

from cfs.exceptions import ProblemDefinitionError
from cfs.main import RunConfig, cli, resolve_problem, run
from cfs.verification.reporting import read_report_json
from config.logging_config import NOISY_LOGGERS

QUIET = ["--log-level", "ERROR"]


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def csv_rows(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


# =============================================================================
# 1. COMMANDS
# =============================================================================

class TestCommands:
    """End-to-end runs of each sub-command."""

    def test_solve(self, runner):
        """Test: solve writes one row per node with the boundary values at the ends."""
        result = runner.invoke(cli, QUIET + ["solve", "--example", "ex1", "--epsilon", "1e-2", "--n", "101"])
        assert result.exit_code == 0, result.output
        rows = csv_rows(result.output)
        assert len(rows) == 101
        assert list(rows[0]) == ["x", "phi_numeric", "phi_exact", "abs_error"]
        assert (float(rows[0]["x"]), float(rows[0]["phi_numeric"])) == (0.0, 1.0)
        assert (float(rows[-1]["x"]), float(rows[-1]["phi_numeric"])) == (1.0, 0.0)

    def test_solve_default_grid(self, runner):
        """Test: without --n the example's own grid size is used."""
        result = runner.invoke(cli, QUIET + ["solve", "-e", "ex2"])
        assert result.exit_code == 0, result.output
        assert len(csv_rows(result.output)) == 301

    def test_convergence(self, runner):
        """Test: convergence writes one row per grid spacing."""
        result = runner.invoke(cli, QUIET + ["convergence", "--example", "ex5", "--epsilon", "1e-2"])
        assert result.exit_code == 0, result.output
        rows = csv_rows(result.output)
        assert [row["n_points"] for row in rows] == ["21", "41", "81", "161", "321"]
        assert rows[0]["observed_order"] == ""
        assert float(rows[-1]["observed_order"]) > 1.5

    def test_convergence_json_file(self, runner, tmp_path):
        """Test: --output and --format json write a report file and nothing to stdout."""
        target = tmp_path / "ex2.json"
        result = runner.invoke(
            cli,
            QUIET + ["convergence", "-e", "ex2", "--h-list", "0.05,0.025,0.0125", "--workers", "2",
                     "--format", "json", "-o", str(target)],
        )
        assert result.exit_code == 0, result.output
        assert result.output == ""
        report = read_report_json(target)
        assert [row.n_points for row in report.rows] == [21, 41, 81]
        assert report.lsq_slope > 1.5

    def test_sweep(self, runner):
        """Test: sweep-epsilon stacks one profile per epsilon."""
        result = runner.invoke(
            cli, QUIET + ["sweep-epsilon", "-e", "ex3", "--epsilon-list", "0.1,0.01", "--n", "11"]
        )
        assert result.exit_code == 0, result.output
        rows = csv_rows(result.output)
        assert len(rows) == 22
        assert {row["epsilon"] for row in rows} == {"0.10000000000000001", "0.01"}

    def test_list_examples(self, runner):
        """Test: one line per built-in example."""
        result = runner.invoke(cli, QUIET + ["list-examples"])
        assert result.exit_code == 0
        lines = result.output.strip().split("\n")
        assert [line.split()[0] for line in lines] == ["ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "ex7"]

    def test_problem_file(self, runner, tmp_path):
        """Test: --example accepts the path of a problem file."""
        path = tmp_path / "ramp.env"
        path.write_text("b=1\nq=1\nphi_left=0\nphi_right=1\nexact=x\nn_points=21\n")
        result = runner.invoke(cli, QUIET + ["solve", "-e", str(path), "--epsilon", "0.05", "--format", "json"])
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert len(payload["x"]) == 21
        assert max(payload["abs_error"]) <= 1e-12

    def test_problem_file_epsilon(self, runner, tmp_path):
        """Test: without --epsilon the file's own epsilon (and the mu built from it) is used."""
        path = tmp_path / "shifted.env"
        path.write_text(
            "epsilon=0.5\nmu=0.1*epsilon\nb=1\nphi_left=0\nphi_right=1\n"
            "exact=(exp(x/(epsilon+mu))-1)/(exp(1/(epsilon+mu))-1)\nn_points=21\n"
        )

        def exact_at_half(diffusion: float) -> float:
            return math.expm1(0.5 / diffusion) / math.expm1(1.0 / diffusion)

        result = runner.invoke(cli, QUIET + ["solve", "-e", str(path), "--format", "json"])
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["x"][10] == pytest.approx(0.5)
        assert payload["phi_exact"][10] == pytest.approx(exact_at_half(0.55), abs=1e-12)
        assert payload["phi_numeric"][10] == pytest.approx(exact_at_half(0.55), abs=1e-12)

        result = runner.invoke(cli, QUIET + ["solve", "-e", str(path), "--epsilon", "0.1", "--format", "json"])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["phi_exact"][10] == pytest.approx(exact_at_half(0.11), abs=1e-12)


# =============================================================================
# 2. ERRORS
# =============================================================================

class TestErrors:
    """Exit codes: 1 for solver failures, 2 for usage errors."""

    def test_unknown_example(self, runner):
        result = runner.invoke(cli, QUIET + ["solve", "--example", "ex9"])
        assert result.exit_code == 2
        assert "--example" in result.output

    def test_invalid_example_parameters(self, runner):
        result = runner.invoke(cli, QUIET + ["solve", "--example", "ex2", "--epsilon", "1"])
        assert result.exit_code == 1

    def test_too_few_points(self, runner):
        result = runner.invoke(cli, QUIET + ["solve", "--example", "ex1", "--n", "2"])
        assert result.exit_code == 2

    def test_bad_h_list(self, runner):
        result = runner.invoke(cli, QUIET + ["convergence", "-e", "ex2", "--h-list", "0.05,abc"])
        assert result.exit_code == 2

    def test_h_without_grid(self, runner):
        result = runner.invoke(cli, QUIET + ["convergence", "-e", "ex2", "--h-list", "0.05,0.03"])
        assert result.exit_code == 2
        assert "--h-list" in result.output

    def test_missing_example(self, runner):
        result = runner.invoke(cli, QUIET + ["solve"])
        assert result.exit_code == 2

    def test_convergence_without_exact_solution(self, runner, tmp_path):
        path = tmp_path / "open.env"
        path.write_text("b=1\nphi_left=0\nphi_right=1\n")
        result = runner.invoke(cli, QUIET + ["convergence", "-e", str(path)])
        assert result.exit_code == 1


# =============================================================================
# 3. PROGRAMMATIC ENTRY POINT
# =============================================================================

class TestRun:
    """Tests for RunConfig, resolve_problem and run."""

    def test_run_writes_file(self, tmp_path):
        """Test: run returns 0 and writes the requested file."""
        target = tmp_path / "profile.csv"
        config = RunConfig(command="solve", example="ex6", epsilon=0.01, n_points=11, output=target)
        assert run(config) == 0
        assert len(target.read_text().strip().split("\n")) == 12

    def test_run_reports_failure(self):
        """Test: solver errors become exit status 1."""
        assert run(RunConfig(command="solve", example="ex2", epsilon=1.0)) == 1

    def test_resolve_problem(self):
        """Test: built-in names are looked up with the given parameters."""
        spec = resolve_problem("ex3", 0.05, 0.001)
        assert (spec.name, spec.epsilon, spec.mu) == ("ex3", 0.05, 0.001)
        with pytest.raises(ProblemDefinitionError):
            resolve_problem("missing.env", 0.05)


# =============================================================================
# 4. LOGGING
# =============================================================================

class TestLogging:
    """Tests for the logging setup done by the CLI group."""

    def test_log_level_and_quiet_libraries(self, runner):
        """Test: --log-level reaches the root logger; third-party loggers stay at WARNING."""
        result = runner.invoke(cli, ["--log-level", "debug", "list-examples"])
        assert result.exit_code == 0
        assert logging.getLogger().getEffectiveLevel() == logging.DEBUG
        for name in NOISY_LOGGERS:
            assert logging.getLogger(name).level == logging.WARNING
        assert logging.getLogger("py.warnings").level == logging.WARNING
