"""
Problem file loader tests.

Usage:
    pytest cfs/problems/tests/test_loader.py -v
"""
import numpy as np
import pytest

from cfs.exceptions import ExpressionError, ProblemDefinitionError
from cfs.problems.loader import load_problem

LAYER_FILE = """\
# outflow layer with a shift
name=layer
description=b=1 with a boundary layer at x=1
epsilon=1e-2
mu=0.1*epsilon
b=1
phi_left=1
phi_right=0
exact=(1 - exp(-(1 - x)/(epsilon + mu)))/(1 - exp(-1/(epsilon + mu)))
n_points=51
"""


def write_problem(tmp_path, text: str, name: str = "problem.env"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadProblem:
    """Tests for load_problem."""

    def test_full_file(self, tmp_path):
        """Test: every key is parsed and parameters are substituted."""
        spec = load_problem(write_problem(tmp_path, LAYER_FILE))
        assert spec.name == "layer"
        assert spec.description == "b=1 with a boundary layer at x=1"
        assert spec.epsilon == pytest.approx(1e-2)
        assert spec.mu == pytest.approx(1e-3)
        assert spec.default_n_points == 51
        assert spec.exact(0.99) == pytest.approx(0.597110, abs=1e-6)
        assert np.all(spec.reaction(np.linspace(0, 1, 3)) == 0.0)

    def test_overrides(self, tmp_path):
        """Test: explicit epsilon and mu win over the file."""
        spec = load_problem(write_problem(tmp_path, LAYER_FILE), epsilon=0.1, mu=0.0)
        assert spec.epsilon == 0.1 and spec.mu == 0.0
        assert spec.exact(0.9) == pytest.approx((1 - np.exp(-1.0)) / (1 - np.exp(-10.0)), rel=1e-12)

    def test_minimal_file(self, tmp_path):
        """Test: defaults fill the optional keys; the name comes from the file."""
        spec = load_problem(write_problem(tmp_path, "b=1+x\nphi_left=0\nphi_right=1\nq=exp(x)\n", name="mini.env"))
        assert spec.name == "mini"
        assert spec.epsilon == pytest.approx(1e-2)
        assert spec.mu == 0.0
        assert spec.exact is None
        assert spec.advection(0.5) == pytest.approx(1.5)
        assert spec.source(0.0) == pytest.approx(1.0)

    def test_missing_file(self, tmp_path):
        """Test: a missing path is a problem error."""
        with pytest.raises(ProblemDefinitionError, match="not found"):
            load_problem(tmp_path / "nothing.env")

    def test_unknown_key(self, tmp_path):
        """Test: keys outside the format are rejected."""
        with pytest.raises(ProblemDefinitionError, match="unknown keys"):
            load_problem(write_problem(tmp_path, "b=1\nphi_left=0\nphi_right=1\nd=3\n"))

    def test_missing_key(self, tmp_path):
        """Test: b, phi_left and phi_right are required."""
        with pytest.raises(ProblemDefinitionError, match="phi_right"):
            load_problem(write_problem(tmp_path, "b=1\nphi_left=0\n"))

    def test_bad_expression(self, tmp_path):
        """Test: an unparsable coefficient raises ExpressionError."""
        with pytest.raises(ExpressionError):
            load_problem(write_problem(tmp_path, "b=tanh(x)\nphi_left=0\nphi_right=1\n"))

    @pytest.mark.parametrize("n_points", ["many", "2"])
    def test_bad_grid_size(self, tmp_path, n_points):
        """Test: n_points must be an integer of at least 3."""
        with pytest.raises(ProblemDefinitionError):
            load_problem(write_problem(tmp_path, f"b=1\nphi_left=0\nphi_right=1\nn_points={n_points}\n"))

    def test_invalid_diffusion(self, tmp_path):
        """Test: eps + mu*b <= 0 is caught when the problem is built."""
        with pytest.raises(ProblemDefinitionError):
            load_problem(write_problem(tmp_path, "epsilon=1e-3\nmu=0.1\nb=-1\nphi_left=0\nphi_right=1\n"))
