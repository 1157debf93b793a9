#!/usr/bin/env python
"""
Unit tests for the singular package: singular structures, the quantized set
and desingularized curvatures.
"""
import math

import numpy as np
import pytest

from errors import PreconditionError
from geometry import build_disc_mesh
from singular import (CRITICAL, NONPOSITIVE, SUBCRITICAL, SUPERCRITICAL, CurvatureData, SingularStructure,
                      classify_surface, desingularize, gamma_distance, gamma_set, hchi_nonempty, ratio_D,
                      singular_chi, trudinger_tau)


@pytest.fixture(scope="module")
def disc():
    return build_disc_mesh(1.0, 1, include_points=[(0.0, 0.0)])


class TestSingularStructure:
    """Test cases for SingularStructure."""

    def test_order_constraint(self):
        """Test that orders at or below -1 are rejected."""
        with pytest.raises(PreconditionError, match="alpha > -1"):
            SingularStructure(interior=((0, -1.0),))
        with pytest.raises(PreconditionError, match="beta > -1"):
            SingularStructure(corners=((0, -1.5),))

    def test_distinct_points(self):
        """Test that repeated vertices are rejected."""
        with pytest.raises(PreconditionError):
            SingularStructure(interior=((3, 0.5), (3, 1.0)))

    def test_from_points_snaps_to_vertices(self, disc):
        """Test snapping an interior point at the origin."""
        sing = SingularStructure.from_points(disc, interior=[(0.0, 0.0, -0.5)])
        vertex = sing.points[0]
        np.testing.assert_allclose(disc.vertices[vertex], (0.0, 0.0), atol=1e-12)
        assert sing.alpha_at(vertex) == -0.5

    def test_from_points_rejects_non_vertices(self, disc):
        """Test that points away from every vertex are rejected."""
        with pytest.raises(PreconditionError, match="not a mesh vertex"):
            SingularStructure.from_points(disc, interior=[(0.123456, 0.0654321, 0.5)])

    def test_corner_must_be_on_boundary(self, disc):
        """Test that an interior vertex cannot carry a corner."""
        with pytest.raises(PreconditionError, match="not on the boundary"):
            SingularStructure.from_points(disc, corners=[(0.0, 0.0, 0.5)])


class TestCharacteristics:
    """Test cases for chi, tau and the classification."""

    def test_subcritical_disc(self, disc):
        """Test chi = 0.5 and tau = 1 for a disc with a cone of order -1/2."""
        sing = SingularStructure.from_points(disc, interior=[(0.0, 0.0, -0.5)])
        chi, tau = singular_chi(disc, sing), trudinger_tau(sing)
        assert chi == 0.5
        assert tau == 1.0
        assert classify_surface(chi, tau) == SUBCRITICAL

    def test_tau_terms(self):
        """Test the interior and corner terms of tau."""
        assert trudinger_tau(SingularStructure()) == 1.0
        assert trudinger_tau(SingularStructure(interior=((1, -0.75),))) == 0.5
        assert trudinger_tau(SingularStructure(corners=((1, -0.5),))) == 0.5

    def test_classification(self):
        """Test the four labels."""
        assert classify_surface(1.0, 1.0) == CRITICAL
        assert classify_surface(2.0, 1.0) == SUPERCRITICAL
        assert classify_surface(0.0, 1.0) == NONPOSITIVE
        assert classify_surface(-1.0, 0.5) == NONPOSITIVE
        with pytest.raises(PreconditionError):
            classify_surface(1.0, 1.5)


class TestGammaSet:
    """Test cases for the quantized set."""

    def test_regular_values(self):
        """Test multiples of 4 pi without singularities."""
        values = gamma_set(SingularStructure(), 20.0 * math.pi)
        np.testing.assert_allclose(values, [4.0 * math.pi * k for k in range(6)])

    def test_cone_values(self):
        """Test the extra values 8 pi (1 + alpha) + 4 pi k."""
        values = gamma_set(SingularStructure(interior=((1, -0.75),)), 10.0 * math.pi)
        np.testing.assert_allclose(values, [2.0 * math.pi * k for k in range(6)])

    def test_duplicates_merged(self):
        """Test that coinciding values appear once."""
        values = gamma_set(SingularStructure(interior=((1, -0.5),)), 8.0 * math.pi)
        assert len(values) == 3

    def test_distance(self):
        """Test the distance from lambda to the set."""
        assert gamma_distance(10.0 * math.pi, SingularStructure()) == pytest.approx(2.0 * math.pi)
        assert gamma_distance(4.0 * math.pi, SingularStructure()) == pytest.approx(0.0, abs=1e-12)

    def test_cap_must_be_positive(self):
        with pytest.raises(PreconditionError):
            gamma_set(SingularStructure(), 0.0)


class TestCurvature:
    """Test cases for desingularization and the boundary ratio."""

    def test_regular_data_unchanged(self, disc):
        """Test that empty structures leave the curvatures alone."""
        K = np.ones(disc.n_vertices)
        h = np.full(disc.n_boundary, 0.5)
        data = desingularize(K, h, SingularStructure(), disc)
        np.testing.assert_array_equal(data.K_tilde, K)
        np.testing.assert_array_equal(data.h_tilde, h)

    def test_positive_order_damps_pole(self, disc):
        """Test that a cone of positive order reduces K~ at its vertex."""
        sing = SingularStructure.from_points(disc, interior=[(0.0, 0.0, 1.0)])
        K = np.ones(disc.n_vertices)
        data = desingularize(K, np.zeros(disc.n_boundary), sing, disc)
        pole = sing.points[0]
        assert np.all(data.K_tilde > 0)
        assert data.K_tilde[pole] == data.K_tilde.min()
        assert data.K_tilde[pole] < 1.0

    def test_ratio_D(self, disc):
        """Test h / sqrt|K| on the boundary."""
        K = np.full(disc.n_vertices, -4.0)
        h = np.full(disc.n_boundary, 1.0)
        np.testing.assert_allclose(ratio_D(K, h, disc), 0.5)
        with pytest.raises(PreconditionError):
            ratio_D(np.zeros(disc.n_vertices), h, disc)

    def test_hchi_nonempty(self):
        """Test the sign conditions of the admissible set."""
        positive = CurvatureData.regular(np.ones(4), np.zeros(2))
        assert hchi_nonempty(positive, 1.0)
        assert not hchi_nonempty(positive, -1.0)
        assert not hchi_nonempty(positive, 0.0)
        mixed = CurvatureData.regular(np.ones(4), -np.ones(2))
        assert hchi_nonempty(mixed, 0.0)
