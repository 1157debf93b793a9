#!/usr/bin/env python
"""
Unit tests for the asymptotics package: bubbles, concentration, Pohozaev
defects, Morse indices and Trudinger-Moser probes.
"""
import math

import numpy as np
import pytest

from asymptotics import (DIRECT, MEAN_FIELD, Barycenter, BubbleFamily, boundary_barycenter, bubble,
                         bubble_slopes, concentration_points, local_mass, morse_index, pohozaev_residual,
                         probe_constant, raw_bubble, resolved_lambdas, tm_probe, tm_probe_fields)
from errors import PreconditionError
from functional import EnergyParams
from geometry import build_disc_mesh
from singular import CurvatureData


@pytest.fixture(scope="module")
def disc():
    return build_disc_mesh(1.0, 2)


@pytest.fixture(scope="module")
def flat(disc):
    """K = 1 and h = 0: u = 0 solves the mean-field equation for every lambda."""
    return CurvatureData.regular(np.ones(disc.n_vertices), np.zeros(disc.n_boundary))


class TestBubbles:
    """Test cases for bubble test functions."""

    def test_barycenter_weights(self):
        """Test that weights must be non-negative and sum to one."""
        with pytest.raises(PreconditionError):
            Barycenter(((0.5, (0.0, 0.0)), (0.6, (1.0, 0.0))))
        with pytest.raises(PreconditionError):
            Barycenter(())
        sigma = Barycenter.single((0.2, 0.3))
        assert len(sigma) == 1
        np.testing.assert_array_equal(sigma.points, [[0.2, 0.3]])

    def test_boundary_barycenter(self, disc):
        """Test that the atoms are boundary vertices of the chosen loop."""
        sigma = boundary_barycenter(disc, loop=0, points=2)
        for point in sigma.points:
            vertex, distance = disc.nearest_vertex(point)
            assert distance == 0.0
            assert disc.vertex_flags[vertex] == 1
        with pytest.raises(PreconditionError):
            boundary_barycenter(disc, loop=3)

    def test_raw_bubble_peak(self):
        """Test log b at the atom and the decay away from it."""
        sigma = Barycenter.single((0.0, 0.0))
        values = raw_bubble(sigma, 10.0, np.array([(0.0, 0.0), (1.0, 0.0)]))
        assert values[0] == pytest.approx(2.0 * math.log(10.0))
        assert values[1] == pytest.approx(math.log(100.0 / 101.0 ** 2))
        with pytest.raises(PreconditionError):
            raw_bubble(sigma, 0.5, np.zeros((1, 2)))

    def test_bubble_is_mean_zero(self, disc):
        phi = bubble(Barycenter.single((0.0, 0.0)), 20.0, disc)
        assert disc.mean(phi) == pytest.approx(0.0, abs=1e-12)

    def test_resolution_excludes_large_lambda(self, disc):
        """Test that the coarse mesh cannot resolve Lambda = 1e4."""
        used, excluded = resolved_lambdas(Barycenter.single((0.0, 0.0)), [1.0, 1e4], disc)
        assert used == (1.0,)
        assert excluded == (1e4,)

    def test_slopes_need_three_values(self, disc, flat):
        with pytest.raises(PreconditionError):
            bubble_slopes(Barycenter.single((0.0, 0.0)), [1.0, 2.0], flat, disc)


class TestConcentration:
    """Test cases for concentration points and local masses."""

    @pytest.fixture(scope="class")
    def graded(self):
        return build_disc_mesh(1.0, 2, grading_points=[(0.3, 0.0)])

    def test_bubble_concentrates(self, graded):
        """Test that one ball captures most of a concentrated bubble."""
        data = CurvatureData.regular(np.ones(graded.n_vertices), np.zeros(graded.n_boundary))
        u = bubble(Barycenter.single((0.3, 0.0)), 50.0, graded)
        report = concentration_points(u, data, graded, 1, 0.1)
        assert report.captured_fraction > 0.85
        assert np.linalg.norm(np.asarray(report.points[0]) - (0.3, 0.0)) < 0.05
        assert report.summary()["radius"] == 0.1

    def test_flat_field_spreads(self, disc, flat):
        """Test that a uniform density is not concentrated in a small ball."""
        report = concentration_points(np.zeros(disc.n_vertices), flat, disc, 1, 0.1)
        assert report.captured_fraction < 0.05
        assert not report.concentrated

    def test_non_positive_mass(self, disc):
        data = CurvatureData.regular(-np.ones(disc.n_vertices), np.zeros(disc.n_boundary))
        with pytest.raises(PreconditionError):
            concentration_points(np.zeros(disc.n_vertices), data, disc, 1, 0.1)

    def test_local_mass(self, disc, flat):
        """Test twice the area of a ball for unit curvature."""
        interior, boundary = local_mass(np.zeros(disc.n_vertices), flat, disc, (0.0, 0.0), 0.5)
        assert interior == pytest.approx(2.0 * math.pi * 0.25, rel=0.15)
        assert boundary == 0.0


class TestPohozaev:
    """Test cases for the Pohozaev defect."""

    def test_trivial_solution(self, disc, flat):
        """Test a small defect at the exact solution u = 0."""
        residual = pohozaev_residual(np.zeros(disc.n_vertices), flat, EnergyParams(3.0), disc, (0.0, 0.0), 0.5)
        assert residual < 0.05

    def test_ball_must_be_inside(self, disc, flat):
        with pytest.raises(PreconditionError, match="not inside"):
            pohozaev_residual(np.zeros(disc.n_vertices), flat, EnergyParams(3.0), disc, (0.8, 0.0), 0.3)


class TestMorse:
    """Test cases for Morse indices at u = 0 with K = 1, h = 0."""

    def test_stable_below_first_eigenvalue(self, disc, flat):
        """Test index 0 for the mean-field energy and 1 for the direct one at lambda = 2 pi."""
        u = np.zeros(disc.n_vertices)
        params = EnergyParams(2.0 * math.pi)
        assert morse_index(u, flat, params, disc, MEAN_FIELD, cap=4).index == 0
        assert morse_index(u, flat, params, disc, DIRECT, cap=4).index == 1

    def test_index_counts_first_eigenspace(self, disc, flat):
        """Test index 2 at lambda = 6 pi, between the first two Neumann eigenvalues (times pi)."""
        u = np.zeros(disc.n_vertices)
        params = EnergyParams(6.0 * math.pi)
        result = morse_index(u, flat, params, disc, MEAN_FIELD, cap=6)
        assert result.index == 2
        assert not result.capped
        assert str(result) == "2"
        assert morse_index(u, flat, params, disc, DIRECT, cap=6).index == 3

    def test_capped_index(self, disc, flat):
        """Test that a full set of negative eigenvalues is reported as a lower bound."""
        u = np.zeros(disc.n_vertices)
        result = morse_index(u, flat, EnergyParams(6.0 * math.pi), disc, MEAN_FIELD, cap=1)
        assert result.capped
        assert str(result) == ">=1"

    def test_unknown_hessian(self, disc, flat):
        with pytest.raises(PreconditionError):
            morse_index(np.zeros(disc.n_vertices), flat, EnergyParams(1.0), disc, "other")


class TestTrudingerMoser:
    """Test cases for the Trudinger-Moser probes."""

    def test_constants(self):
        assert probe_constant("interior", 1.0) == pytest.approx(1.0 / (8.0 * math.pi))
        assert probe_constant("boundary", 0.5) == pytest.approx(1.0 / (8.0 * math.pi))
        assert probe_constant("combined", 1.0) == pytest.approx(1.0 / (16.0 * math.pi))
        assert probe_constant("local", 1.0, alpha=-0.5) == pytest.approx(1.0 / (8.0 * math.pi))
        with pytest.raises(PreconditionError):
            probe_constant("global", 1.0)

    def test_interior_probe_reports_ratios(self, disc, flat):
        """Test one incremental ratio per additional bubble."""
        family = BubbleFamily(Barycenter.single((0.0, 0.0)), (2.0, 4.0, 8.0))
        report = tm_probe(flat, disc, family, "interior")
        assert len(report.ratios) == 2
        assert report.lambdas == (2.0, 4.0, 8.0)
        assert report.ratio == max(report.ratios)
        assert np.all(np.isfinite(report.ratios))

    def test_degenerate_families(self, disc, flat):
        u = np.zeros(disc.n_vertices)
        with pytest.raises(PreconditionError):
            tm_probe_fields([u], flat, disc, "interior")
        with pytest.raises(PreconditionError, match="does not grow"):
            tm_probe_fields([u, u], flat, disc, "interior")
        with pytest.raises(PreconditionError):
            tm_probe_fields([u, u], flat, disc, "nowhere")
