#!/usr/bin/env python
"""
Unit tests for curvature family descriptions.
"""
import numpy as np
import pytest

from config import CurvatureFamily, parse_family
from errors import ConfigError
from geometry import TriangleMesh


@pytest.fixture
def square():
    return TriangleMesh(np.array([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, 0.5)]),
                        np.array([(0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4)]))


class TestParseFamily:
    """Test cases for parse_family."""

    def test_constant(self):
        family = parse_family(" constant: 2.5 ")
        assert family == CurvatureFamily("constant", (2.5,))
        assert str(family) == "constant:2.5"

    def test_radial_polynomial(self):
        """Test coefficients in increasing powers of r^2."""
        family = parse_family("radial_poly:1,2")
        np.testing.assert_allclose(family.evaluate(np.array([(1.0, 0.0), (1.0, 1.0)])), [3.0, 5.0])

    def test_angular(self):
        """Test a cos(m theta) + b."""
        family = parse_family("angular:2,3,1")
        np.testing.assert_allclose(family.evaluate(np.array([(1.0, 0.0), (0.0, 2.0)])), [3.0, 1.0], atol=1e-12)

    @pytest.mark.parametrize("text", ["constant", "spline:1,2", "constant:1,2", "angular:1,2", "radial_poly:a"])
    def test_invalid(self, text):
        with pytest.raises(ConfigError):
            parse_family(text)

    def test_missing_table(self, tmp_path):
        with pytest.raises(ConfigError, match="does not exist"):
            parse_family("table:absent.txt", str(tmp_path))

    def test_line_number(self):
        with pytest.raises(ConfigError, match="^line 7: "):
            parse_family("spline:1", line=7)


class TestTables:
    """Test cases for tabulated families."""

    def test_vertex_table(self, tmp_path, square):
        (tmp_path / "K.txt").write_text("# one value per vertex\n1\n2\n3\n4\n5\n")
        family = parse_family("table:K.txt", str(tmp_path))
        np.testing.assert_array_equal(family.on_vertices(square), [1, 2, 3, 4, 5])
        np.testing.assert_array_equal(family.on_boundary(square), np.array([1, 2, 3, 4, 5])[square.boundary_vertices])
        with pytest.raises(ConfigError, match="no closed form"):
            family.evaluate(square.vertices)

    def test_boundary_table(self, tmp_path, square):
        (tmp_path / "h.txt").write_text("0.1 0.2 0.3 0.4\n")
        family = parse_family("table:h.txt", str(tmp_path))
        np.testing.assert_allclose(family.on_boundary(square), [0.1, 0.2, 0.3, 0.4])
        with pytest.raises(ConfigError, match="4 values for 5 vertices"):
            family.on_vertices(square)

    def test_closed_forms_on_mesh(self, square):
        family = parse_family("constant:-1.0")
        assert family.on_vertices(square).tolist() == [-1.0] * 5
        assert family.on_boundary(square).tolist() == [-1.0] * 4
