#!/usr/bin/env python
"""
Unit tests for the geometry package: mesh validation, generators and mesh files.
"""
import math

import numpy as np
import pytest

from errors import MeshError, PreconditionError
from geometry import (TriangleMesh, build_annulus_mesh, build_disc_mesh, build_multihole_mesh, read_mesh,
                      write_mesh)


class TestTriangleMesh:
    """Test cases for TriangleMesh."""

    @pytest.fixture
    def square(self):
        """Unit square split into four triangles around its centre."""
        vertices = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, 0.5)]
        triangles = [(0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4)]
        return TriangleMesh(vertices, triangles)

    def test_square_measures(self, square):
        """Test area, boundary length and Euler characteristic of the square."""
        assert square.area == pytest.approx(1.0)
        assert square.boundary_length() == pytest.approx(4.0)
        assert square.euler_characteristic() == 1
        assert len(square.boundary_loops) == 1
        assert len(square.boundary_loops[0]) == 4
        assert square.interior_vertices.tolist() == [4]

    def test_lumped_quadrature_is_exact_for_linear_fields(self, square):
        """Test that vertex-area quadrature integrates linear fields exactly."""
        x = square.vertices[:, 0]
        assert square.integrate(x) == pytest.approx(0.5)
        assert square.mean(2.0 * x + 1.0) == pytest.approx(2.0)

    def test_orientation_is_fixed(self):
        """Test that clockwise triangles are reoriented."""
        mesh = TriangleMesh([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], [(0, 2, 1)])
        assert np.all(mesh.triangle_areas > 0)

    def test_degenerate_triangle_rejected(self):
        """Test that collinear triangles raise MeshError."""
        with pytest.raises(MeshError, match="degenerate"):
            TriangleMesh([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], [(0, 1, 2)])

    def test_unused_vertex_rejected(self):
        """Test that vertices outside every triangle raise MeshError."""
        with pytest.raises(MeshError, match="belong to no triangle"):
            TriangleMesh([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (5.0, 5.0)], [(0, 1, 2)])

    def test_missing_vertex_rejected(self):
        """Test that triangles referencing missing vertices raise MeshError."""
        with pytest.raises(MeshError, match="missing vertex"):
            TriangleMesh([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], [(0, 1, 3)])

    def test_boundary_extension_and_restriction(self, square):
        """Test that restricting an extended boundary field returns it unchanged."""
        values = np.array([1.0, 2.0, 3.0, 4.0])
        extended = square.extend_boundary(values)
        assert extended[4] == 0.0
        np.testing.assert_array_equal(square.restrict_to_boundary(extended), values)

    def test_field_shape_checked(self, square):
        """Test that fields of the wrong length raise PreconditionError."""
        with pytest.raises(PreconditionError):
            square.integrate(np.ones(3))

    def test_interpolation_reproduces_linear_fields(self):
        """Test piecewise-linear interpolation at interior points."""
        mesh = build_disc_mesh(1.0, 1)
        field = 2.0 * mesh.vertices[:, 0] + 3.0 * mesh.vertices[:, 1] + 1.0
        points = np.array([(0.1, 0.2), (-0.3, 0.4), (0.5, -0.5)])
        expected = 2.0 * points[:, 0] + 3.0 * points[:, 1] + 1.0
        np.testing.assert_allclose(mesh.interpolate(field, points), expected, atol=1e-12)


class TestGenerators:
    """Test cases for the mesh generators."""

    def test_disc_mesh(self):
        """Test topology and measures of the disc mesh."""
        mesh = build_disc_mesh(1.0, 1)
        assert mesh.euler_characteristic() == 1
        assert len(mesh.boundary_loops) == 1
        assert mesh.area == pytest.approx(math.pi, rel=0.01)
        assert mesh.boundary_length() == pytest.approx(2.0 * math.pi, rel=0.01)

    def test_annulus_mesh(self):
        """Test that the annulus has two loops with the outer one first."""
        mesh = build_annulus_mesh(0.5, 1.0, 1)
        assert mesh.euler_characteristic() == 0
        assert len(mesh.boundary_loops) == 2
        assert mesh.boundary_length(0) == pytest.approx(2.0 * math.pi, rel=0.01)
        assert mesh.boundary_length(1) == pytest.approx(math.pi, rel=0.01)

    def test_multihole_mesh(self):
        """Test a disc with two holes."""
        mesh = build_multihole_mesh(1.0, [((0.4, 0.0), 0.15), ((-0.4, 0.0), 0.15)], 2)
        assert len(mesh.boundary_loops) == 3
        assert mesh.euler_characteristic() == -1

    def test_include_points_are_vertices(self):
        """Test that requested points become mesh vertices."""
        mesh = build_disc_mesh(1.0, 1, include_points=[(0.3, 0.2)])
        _, distance = mesh.nearest_vertex((0.3, 0.2))
        assert distance < 1e-12

    def test_grading_refines_near_point(self):
        """Test that grading shortens the edges at the graded point."""
        mesh = build_disc_mesh(1.0, 1, grading_points=[(0.2, 0.1)])
        vertex, distance = mesh.nearest_vertex((0.2, 0.1))
        assert distance < 1e-12
        assert mesh.incident_edge_lengths(vertex).max() < 0.5 / 8.0

    def test_symmetry_order_controls_ring_counts(self):
        """Test that boundary vertex counts are multiples of the symmetry order."""
        mesh = build_disc_mesh(1.0, 1, symmetry_order=5)
        assert len(mesh.boundary_loops[0]) % 5 == 0

    def test_invalid_radii(self):
        """Test that invalid radii raise PreconditionError."""
        with pytest.raises(PreconditionError):
            build_disc_mesh(0.0)
        with pytest.raises(PreconditionError):
            build_annulus_mesh(1.0, 0.5)

    @pytest.mark.parametrize("build, chi", [
        (lambda r: build_disc_mesh(1.0, r), 1),
        (lambda r: build_annulus_mesh(0.5, 1.0, r), 0),
    ], ids=["disc", "annulus"])
    def test_refinement_quadruples(self, build, chi):
        """Test that one more level halves the edges and quadruples the triangles."""
        for r in (0, 1):
            coarse, fine = build(r), build(r + 1)
            assert fine.max_edge_length() == pytest.approx(0.5 * coarse.max_edge_length(), rel=0.2)
            assert fine.n_triangles >= 4 * coarse.n_triangles
            assert coarse.euler_characteristic() == fine.euler_characteristic() == chi

    def test_multihole_refinement(self):
        """Test refinement of a disc with two holes; the hole collars scale with the ring spacing."""
        holes = [((0.4, 0.0), 0.15), ((-0.4, 0.0), 0.15)]
        coarse, fine = build_multihole_mesh(1.0, holes, 1), build_multihole_mesh(1.0, holes, 2)
        assert fine.max_edge_length() == pytest.approx(0.5 * coarse.max_edge_length(), rel=0.2)
        assert fine.n_triangles >= 3.5 * coarse.n_triangles
        assert coarse.euler_characteristic() == fine.euler_characteristic() == -1

    def test_overlapping_holes(self):
        """Test that overlapping holes are rejected."""
        with pytest.raises(PreconditionError):
            build_multihole_mesh(1.0, [((0.1, 0.0), 0.2), ((-0.1, 0.0), 0.2)], 1)


class TestMeshIO:
    """Test cases for MESH2D files."""

    def test_write_then_read(self, tmp_path):
        """Test that a written mesh reads back identically."""
        mesh = build_annulus_mesh(0.4, 1.0, 0)
        path = tmp_path / "annulus.mesh"
        write_mesh(mesh, str(path))
        loaded = read_mesh(str(path))
        np.testing.assert_array_equal(loaded.vertices, mesh.vertices)
        np.testing.assert_array_equal(loaded.triangles, mesh.triangles)
        assert len(loaded.boundary_loops) == 2

    def test_bad_header(self, tmp_path):
        """Test that a file without the header raises MeshError."""
        path = tmp_path / "bad.mesh"
        path.write_text("NOT A MESH\n")
        with pytest.raises(MeshError, match="expected header"):
            read_mesh(str(path))

    def test_truncated_file(self, tmp_path):
        """Test that a truncated file raises MeshError."""
        path = tmp_path / "short.mesh"
        path.write_text("MESH2D v1\n3 1 1\n0.0 0.0 1\n")
        with pytest.raises(MeshError, match="ends early"):
            read_mesh(str(path))
