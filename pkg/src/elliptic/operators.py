#!/usr/bin/env python
"""
Piecewise-linear finite element operators on a triangle mesh.
"""
import logging
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

logger = logging.getLogger(__name__)


class FEMOperators(NamedTuple):
    """Stiffness and mass matrices over vertices, boundary mass over boundary vertices."""

    stiffness: sp.csr_matrix
    mass: sp.csr_matrix
    boundary_mass: sp.csr_matrix

    def dirichlet(self, u):
        """The Dirichlet integral of u (no factor 1/2)."""
        return float(u @ (self.stiffness @ u))


def _triangle_blocks(mesh):
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    return rows, cols


def assemble(mesh):
    """
    Assemble the stiffness, consistent mass and boundary mass matrices.

    Degenerate triangles are rejected when the mesh is built.

    Args:
        mesh (TriangleMesh): the mesh

    Returns:
        FEMOperators: symmetric CSR matrices
    """
    n = mesh.n_vertices
    grads = mesh.basis_gradients
    areas = mesh.triangle_areas
    rows, cols = _triangle_blocks(mesh)

    local_k = np.einsum("tid,tjd->tij", grads, grads) * areas[:, None, None]
    stiffness = sp.coo_matrix((local_k.ravel(), (rows, cols)), shape=(n, n)).tocsr()

    local_m = (np.ones((3, 3)) + np.eye(3)) / 12.0
    mass_data = (areas[:, None, None] * local_m[None]).ravel()
    mass = sp.coo_matrix((mass_data, (rows, cols)), shape=(n, n)).tocsr()

    nb = mesh.n_boundary
    edges = mesh.boundary_index[mesh.boundary_edges]
    lengths = mesh.boundary_edge_lengths
    b_rows = np.concatenate([edges[:, 0], edges[:, 1], edges[:, 0], edges[:, 1]])
    b_cols = np.concatenate([edges[:, 0], edges[:, 1], edges[:, 1], edges[:, 0]])
    b_data = np.concatenate([lengths / 3.0, lengths / 3.0, lengths / 6.0, lengths / 6.0])
    boundary_mass = sp.coo_matrix((b_data, (b_rows, b_cols)), shape=(nb, nb)).tocsr()

    # symmetrize away the assembly round-off
    stiffness = 0.5 * (stiffness + stiffness.T)
    logger.debug("assembled FEM operators: %d vertices, %d nonzeros", n, stiffness.nnz)
    return FEMOperators(stiffness.tocsr(), mass, boundary_mass)


def triangle_gradients(mesh, field):
    """(m, 2) constant gradient of a piecewise-linear field on each triangle."""
    field = mesh.check_field(field)
    return np.einsum("ti,tid->td", field[mesh.triangles], mesh.basis_gradients)


def recovered_gradient(mesh, field):
    """
    Vertex gradients by area-weighted averaging of the triangle gradients.

    Returns:
        numpy.ndarray: (n, 2) array
    """
    per_triangle = triangle_gradients(mesh, field) * mesh.triangle_areas[:, None]
    total = np.zeros((mesh.n_vertices, 2))
    weight = np.zeros(mesh.n_vertices)
    for i in range(3):
        np.add.at(total, mesh.triangles[:, i], per_triangle)
        np.add.at(weight, mesh.triangles[:, i], mesh.triangle_areas)
    return total / weight[:, None]
