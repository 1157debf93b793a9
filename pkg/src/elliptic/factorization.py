#!/usr/bin/env python
"""
Factorized Neumann Laplacian.

The stiffness matrix is singular with the constants as kernel. Solves
project the load onto the compatible (zero-sum) subspace, pin one vertex to
make the system definite, and return the mean-zero representative.
"""
import logging

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from errors import PreconditionError, SolverFailure

logger = logging.getLogger(__name__)

PIN_VERTEX = 0


class NeumannSolver:
    """
    Factorized pseudo-inverse of the Neumann stiffness matrix.

    The factorization is built once and is safe to share between threads.
    """

    def __init__(self, mesh, stiffness, method="direct", cg_tol=1e-12, cg_maxiter=None):
        """
        Args:
            mesh (TriangleMesh): the mesh
            stiffness: sparse stiffness matrix of the mesh
            method (str): 'direct' (sparse LU) or 'cg' (conjugate gradients)
            cg_tol (float): relative tolerance of the iterative path
            cg_maxiter (int): iteration cap of the iterative path
        """
        if method not in ("direct", "cg"):
            raise PreconditionError(f"unknown linear solver method '{method}'")
        self.mesh = mesh
        self.method = method
        self.weights = np.asarray(mesh.vertex_areas)
        self.area = float(self.weights.sum())
        self._stiffness = stiffness
        self._cg_tol = cg_tol
        self._cg_maxiter = cg_maxiter or 10 * mesh.n_vertices
        penalty = float(stiffness.diagonal().mean())
        pin = sp.coo_matrix(([penalty], ([PIN_VERTEX], [PIN_VERTEX])), shape=stiffness.shape)
        self._pinned = (stiffness + pin).tocsc()
        self._lu = spla.splu(self._pinned) if method == "direct" else None
        logger.debug("Neumann solver ready (%s, %d unknowns)", method, mesh.n_vertices)

    def project(self, load):
        """Remove the constant component of a dual load vector."""
        load = np.asarray(load, dtype=float)
        return load - self.weights * (load.sum() / self.area)

    def mean_free(self, field):
        return field - float(self.weights @ field) / self.area

    def solve(self, load):
        """
        Mean-zero solution u of K u = P load, with P the load projection.

        Args:
            load: dual vector (n,) or stack (n, k)

        Returns:
            numpy.ndarray: mean-zero field(s) of the same shape
        """
        load = np.asarray(load, dtype=float)
        if load.ndim == 2:
            return np.column_stack([self.solve(column) for column in load.T])
        rhs = self.project(load)
        if self._lu is not None:
            u = self._lu.solve(rhs)
        else:
            u, info = spla.cg(self._pinned, rhs, rtol=self._cg_tol, maxiter=self._cg_maxiter)
            if info != 0:
                raise SolverFailure(f"conjugate gradients did not converge (info={info})")
        if not np.all(np.isfinite(u)):
            raise SolverFailure("Neumann solve produced non-finite values")
        return self.mean_free(u)

    def dual_norm(self, load):
        """sqrt(r^T K^+ r) for the projected load r."""
        rhs = self.project(load)
        return float(np.sqrt(max(rhs @ self.solve(rhs), 0.0)))

    def point_load(self, p):
        """Unit nodal load at vertex p minus the uniform load of the same total."""
        if not 0 <= int(p) < self.mesh.n_vertices:
            raise PreconditionError(f"vertex {p} is not a mesh vertex")
        load = -self.weights / self.area
        load[int(p)] += 1.0
        return load
