#!/usr/bin/env python
"""
Per-mesh cache of assembled operators, factorizations and Green functions.
"""
import logging
import threading
import weakref
from functools import cached_property

import numpy as np
import scipy.sparse.linalg as spla

from elliptic.factorization import NeumannSolver
from elliptic.operators import assemble

logger = logging.getLogger(__name__)

_CONTEXTS = weakref.WeakKeyDictionary()
_CONTEXTS_LOCK = threading.Lock()


class EllipticContext:
    """
    Everything the elliptic layer derives from one mesh.

    Factorizations are built lazily on first use and then shared read-only.
    """

    def __init__(self, mesh, method="direct"):
        self.mesh = mesh
        self.method = method
        self.operators = assemble(mesh)
        self._lock = threading.Lock()
        self._greens = {}

    @cached_property
    def neumann(self):
        return NeumannSolver(self.mesh, self.operators.stiffness, method=self.method)

    @cached_property
    def mass_lu(self):
        return spla.splu(self.operators.mass.tocsc())

    @cached_property
    def boundary_mass_lu(self):
        return spla.splu(self.operators.boundary_mass.tocsc())

    @cached_property
    def interior_stiffness_lu(self):
        """Factorization of the stiffness block on interior vertices (None without interior)."""
        interior = self.mesh.interior_vertices
        if len(interior) == 0:
            return None
        block = self.operators.stiffness[interior][:, interior]
        return spla.splu(block.tocsc())

    @cached_property
    def shifted_stiffness_lu(self):
        """Factorization of K + M, the H1 Riesz map."""
        return spla.splu((self.operators.stiffness + self.operators.mass).tocsc())

    def riesz_l2(self, load):
        """L2 Riesz representative M^-1 load."""
        return self.mass_lu.solve(np.asarray(load, dtype=float))

    def interior_dual_norm(self, load):
        """Norm of a load tested against H1 fields vanishing on the boundary."""
        lu = self.interior_stiffness_lu
        if lu is None:
            return 0.0
        r = np.asarray(load, dtype=float)[self.mesh.interior_vertices]
        return float(np.sqrt(max(r @ lu.solve(r), 0.0)))

    def boundary_dual_norm(self, load):
        """L2 norm on the boundary of a boundary load vector."""
        r = np.asarray(load, dtype=float)
        return float(np.sqrt(max(r @ self.boundary_mass_lu.solve(r), 0.0)))

    def green(self, p):
        with self._lock:
            cached = self._greens.get(p)
        if cached is not None:
            return cached
        field = self.neumann.solve(self.neumann.point_load(p))
        field.setflags(write=False)
        with self._lock:
            self._greens[p] = field
        logger.debug("Green function with pole %d computed", p)
        return field


def get_context(mesh, method="direct"):
    """
    Shared context of a mesh, created on first request.

    Args:
        mesh (TriangleMesh): the mesh
        method (str): linear solver of the Neumann problems

    Returns:
        EllipticContext: cached per (mesh, method)
    """
    with _CONTEXTS_LOCK:
        per_mesh = _CONTEXTS.setdefault(mesh, {})
        context = per_mesh.get(method)
        if context is None:
            context = EllipticContext(mesh, method=method)
            per_mesh[method] = context
    return context
