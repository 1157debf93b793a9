#!/usr/bin/env python
"""
Cyclic rotation groups acting on mesh vertices.
"""
import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.spatial import cKDTree

from errors import PreconditionError

logger = logging.getLogger(__name__)

MATCH_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class SymmetryGroup:
    """
    Cyclic group of order k generated by a vertex permutation.

    ``action[i]`` is the image of vertex i under the generator, so that
    (u o g)[i] = u[action[i]].
    """

    order: int
    action: np.ndarray

    def __post_init__(self):
        action = np.asarray(self.action, dtype=np.int64)
        object.__setattr__(self, "action", action)
        if self.order < 2:
            raise PreconditionError("a symmetry group needs order k >= 2")
        if sorted(action.tolist()) != list(range(len(action))):
            raise PreconditionError("the group action is not a vertex permutation")
        power = np.arange(len(action))
        for _ in range(self.order):
            power = action[power]
        if not np.array_equal(power, np.arange(len(action))):
            raise PreconditionError(f"the generator does not have order dividing {self.order}")

    def powers(self):
        """The permutations g^0, ..., g^(k-1)."""
        current = np.arange(len(self.action))
        result = []
        for _ in range(self.order):
            result.append(current)
            current = self.action[current]
        return result

    @cached_property
    def orbits(self):
        labels = np.full(len(self.action), -1, dtype=np.int64)
        orbits = []
        for v in range(len(self.action)):
            if labels[v] >= 0:
                continue
            orbit = sorted({int(g[v]) for g in self.powers()})
            labels[orbit] = len(orbits)
            orbits.append(orbit)
        return orbits

    @cached_property
    def fixed_set(self):
        """Vertices whose orbit has fewer than k elements."""
        return np.array(sorted(v for orbit in self.orbits if len(orbit) < self.order for v in orbit),
                        dtype=np.int64)

    def validate(self, mesh):
        """Check the action is a mesh automorphism without fixed boundary points."""
        if len(self.action) != mesh.n_vertices:
            raise PreconditionError("group action and mesh have different vertex counts")
        triangles = {tuple(sorted(t)) for t in mesh.triangles.tolist()}
        mapped = {tuple(sorted(t)) for t in self.action[mesh.triangles].tolist()}
        if mapped != triangles:
            raise PreconditionError("the group action is not a mesh automorphism")
        boundary = set(mesh.boundary_vertices.tolist())
        if {int(v) for v in self.action[mesh.boundary_vertices]} != boundary:
            raise PreconditionError("the group action does not preserve the boundary")
        if boundary & set(self.fixed_set.tolist()):
            raise PreconditionError("the group fixes boundary points")
        return self

    def orbit_basis(self):
        """Sparse (n, #orbits) matrix of orbit indicators; its columns sum to one."""
        rows, cols = [], []
        for j, orbit in enumerate(self.orbits):
            rows.extend(orbit)
            cols.extend([j] * len(orbit))
        data = np.ones(len(rows))
        return sp.csr_matrix((data, (rows, cols)), shape=(len(self.action), len(self.orbits)))


def rotation_group(mesh, k, center=(0.0, 0.0)):
    """
    Group generated by the rotation by 2 pi / k about ``center``.

    Raises:
        PreconditionError: when the rotation does not map the mesh onto itself
    """
    if k < 2:
        raise PreconditionError("a rotation group needs k >= 2")
    center = np.asarray(center, dtype=float)
    angle = 2.0 * math.pi / k
    rotation = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
    rotated = (mesh.vertices - center) @ rotation.T + center
    distance, action = cKDTree(mesh.vertices).query(rotated)
    scale = float(np.ptp(mesh.vertices, axis=0).max())
    if distance.max() > MATCH_TOLERANCE * scale:
        raise PreconditionError(f"the mesh is not invariant under rotation by 2pi/{k}")
    group = SymmetryGroup(int(k), action).validate(mesh)
    logger.debug("rotation group of order %d: %d orbits", k, len(group.orbits))
    return group


def group_average(u, group):
    """(1/k) sum_g u o g."""
    u = np.asarray(u, dtype=float)
    if len(u) != len(group.action):
        raise PreconditionError("field and group action have different lengths")
    return sum(u[g] for g in group.powers()) / group.order