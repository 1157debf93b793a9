#!/usr/bin/env python
"""
Unit tests for the elliptic package: assembly, Neumann solves, Green
functions and generalized eigenpairs.
"""
import math

import numpy as np
import pytest

from elliptic import (SymmetricForm, assemble, get_context, green_function, neumann_load, smallest_eigenpairs,
                      solve_neumann)
from errors import CompatibilityError, PreconditionError
from geometry import build_disc_mesh


@pytest.fixture(scope="module")
def disc():
    return build_disc_mesh(1.0, 2)


class TestAssembly:
    """Test cases for the finite element matrices."""

    def test_stiffness_kernel_is_constants(self, disc):
        """Test that the stiffness matrix annihilates constants."""
        ops = assemble(disc)
        np.testing.assert_allclose(ops.stiffness @ np.ones(disc.n_vertices), 0.0, atol=1e-12)

    def test_mass_totals(self, disc):
        """Test that the mass matrices reproduce area and boundary length."""
        ops = assemble(disc)
        assert ops.mass.sum() == pytest.approx(disc.area)
        assert ops.boundary_mass.sum() == pytest.approx(disc.boundary_length())

    def test_dirichlet_of_linear_field(self, disc):
        """Test that the Dirichlet integral of x is the area."""
        ops = assemble(disc)
        assert ops.dirichlet(disc.vertices[:, 0]) == pytest.approx(disc.area, rel=1e-10)


class TestNeumann:
    """Test cases for Neumann problems and Green functions."""

    def test_radial_solution(self, disc):
        """Test -Laplace(u) = 1 with du/dnu = -|S|/|dS| against -r^2/4 + 1/8."""
        rhs = np.ones(disc.n_vertices)
        flux = np.full(disc.n_boundary, -disc.area / disc.boundary_length())
        u = solve_neumann(rhs, flux, disc)
        r2 = np.sum(disc.vertices ** 2, axis=1)
        exact = -r2 / 4.0 + 1.0 / 8.0
        assert disc.mean(u) == pytest.approx(0.0, abs=1e-12)
        assert np.max(np.abs(u - exact)) < 1e-2

    def test_incompatible_data(self, disc):
        """Test that data whose integrals do not cancel raise CompatibilityError."""
        with pytest.raises(CompatibilityError):
            solve_neumann(np.ones(disc.n_vertices), np.zeros(disc.n_boundary), disc)

    def test_load_combines_interior_and_boundary(self, disc):
        """Test the total of the dual load vector."""
        load = neumann_load(np.ones(disc.n_vertices), np.ones(disc.n_boundary), disc)
        assert load.sum() == pytest.approx(disc.area + disc.boundary_length())

    def test_green_function_is_mean_zero_and_cached(self, disc):
        """Test the Green function normalization and context caching."""
        G = green_function(disc, 0)
        assert disc.mean(G) == pytest.approx(0.0, abs=1e-12)
        assert G[0] == G.max()
        assert green_function(disc, 0) is G
        assert not G.flags.writeable

    def test_context_is_shared(self, disc):
        """Test that get_context returns one context per mesh."""
        assert get_context(disc) is get_context(disc)


class TestEigen:
    """Test cases for smallest_eigenpairs and SymmetricForm."""

    def test_first_neumann_eigenvalue_of_disc(self, disc):
        """Test the doubly degenerate first Neumann eigenvalue j'_{1,1}^2."""
        ops = assemble(disc)
        pairs = smallest_eigenpairs(ops.stiffness, ops.mass, 2)
        expected = 1.8411837813406593 ** 2
        for value, _ in pairs:
            assert value == pytest.approx(expected, rel=0.03)

    def test_full_space_includes_constants(self, disc):
        """Test that the full space recovers the zero eigenvalue."""
        ops = assemble(disc)
        value, vector = smallest_eigenpairs(ops.stiffness, ops.mass, 1, subspace="full")[0]
        assert abs(value) < 1e-8
        assert np.std(vector) < 1e-6 * np.max(np.abs(vector))

    def test_low_rank_form_matches_dense(self):
        """Test that the low-rank term enters the form symmetrically."""
        form = SymmetricForm(np.eye(3), np.array([[1.0], [2.0], [0.0]]), np.array([[2.0]]))
        dense = form.to_dense()
        x, y = np.array([1.0, -1.0, 2.0]), np.array([0.5, 0.0, 1.0])
        assert form[x, y] == pytest.approx(x @ dense @ y)
        assert dense[0, 1] == pytest.approx(4.0)

    def test_invalid_requests(self, disc):
        """Test that bad counts and subspaces raise PreconditionError."""
        ops = assemble(disc)
        with pytest.raises(PreconditionError):
            smallest_eigenpairs(ops.stiffness, ops.mass, 0)
        with pytest.raises(PreconditionError):
            smallest_eigenpairs(ops.stiffness, ops.mass, 1, subspace="odd")
        with pytest.raises(PreconditionError):
            smallest_eigenpairs(ops.stiffness, ops.mass, 1, subspace="symmetric")
