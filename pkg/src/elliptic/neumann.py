#!/usr/bin/env python
"""
Neumann boundary value problems and Green functions.
"""
import logging

import numpy as np

from elliptic.context import get_context
from errors import CompatibilityError

logger = logging.getLogger(__name__)

DEFAULT_TOL_COMPAT = 1e-10


def neumann_load(rhs, flux, mesh, context=None):
    """Dual load vector of interior data ``rhs`` and boundary data ``flux``."""
    context = context or get_context(mesh)
    ops = context.operators
    rhs = mesh.check_field(rhs, "rhs")
    flux = mesh.check_boundary_field(flux, "flux")
    return ops.mass @ rhs + mesh.extend_boundary(ops.boundary_mass @ flux)


def solve_neumann(rhs, flux, mesh, tol_compat=DEFAULT_TOL_COMPAT, context=None):
    """
    Mean-zero weak solution of -Laplace(u) = rhs in the domain, du/dnu = flux
    on the boundary.

    Args:
        rhs: vertex field
        flux: boundary field
        mesh (TriangleMesh): the mesh
        tol_compat (float): relative tolerance of the compatibility condition

    Returns:
        numpy.ndarray: mean-zero vertex field

    Raises:
        CompatibilityError: when the integrals of rhs and flux do not cancel
    """
    context = context or get_context(mesh)
    ops = context.operators
    interior = ops.mass @ mesh.check_field(rhs, "rhs")
    boundary = ops.boundary_mass @ mesh.check_boundary_field(flux, "flux")
    total = float(interior.sum() + boundary.sum())
    scale = float(np.abs(interior).sum() + np.abs(boundary).sum())
    if abs(total) > tol_compat * scale:
        raise CompatibilityError(
            f"incompatible Neumann data: integral of rhs plus flux is {total:.3e} (scale {scale:.3e})")
    return context.neumann.solve(interior + mesh.extend_boundary(boundary))


def green_function(mesh, p, context=None):
    """
    Mean-zero Neumann Green function with pole at vertex p.

    The delta is a unit nodal load, balanced by the uniform load -1/|mesh|.

    Args:
        mesh (TriangleMesh): the mesh
        p (int): pole vertex

    Returns:
        numpy.ndarray: read-only field G_p
    """
    context = context or get_context(mesh)
    return context.green(int(p))


def green_functions(mesh, poles, context=None):
    """Green functions for several poles."""
    context = context or get_context(mesh)
    return [context.green(int(p)) for p in poles]
