#!/usr/bin/env python
"""
Triangle meshes of planar model surfaces.

A mesh stores vertices, positively oriented triangles and the boundary loops
traced from the triangle topology. Boundary fields are stored in the order of
``boundary_vertices``, which lists the loops one after the other.
"""
import logging
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.spatial import cKDTree

from errors import MeshError, PreconditionError

logger = logging.getLogger(__name__)

INTERIOR = 0
BOUNDARY = 1

# relative to the squared bounding-box diameter
AREA_TOLERANCE = 1e-15


def _signed_areas(vertices, triangles):
    p0 = vertices[triangles[:, 0]]
    p1 = vertices[triangles[:, 1]]
    p2 = vertices[triangles[:, 2]]
    e1 = p1 - p0
    e2 = p2 - p0
    return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])


def _polygon_area(points):
    x, y = points[:, 0], points[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _readonly(array):
    array.setflags(write=False)
    return array


def _cyclic_match(given, traced):
    """
    Return ``given`` if it is a rotation of ``traced`` or of its reverse.
    """
    n = len(traced)
    if len(given) != n or set(given) != set(traced):
        return None
    start = traced.index(given[0])
    forward = traced[start:] + traced[:start]
    if forward == list(given):
        return list(given)
    backward = list(reversed(traced))
    start = backward.index(given[0])
    backward = backward[start:] + backward[:start]
    if backward == list(given):
        # keep the domain on the left of every loop
        return list(reversed(given))
    return None


class TriangleMesh:
    """
    Planar triangulated domain with boundary loops.

    The mesh is immutable after construction: every array attribute is
    read-only and derived quantities are cached.
    """

    def __init__(self, vertices, triangles, boundary_loops=None):
        """
        Build and validate a mesh.

        Args:
            vertices: (n, 2) array of vertex coordinates
            triangles: (m, 3) array of vertex indices; orientation is fixed up
            boundary_loops: optional explicit loops; they must match the
                loops traced from the triangle topology

        Raises:
            MeshError: on degenerate triangles, non-manifold edges or
                inconsistent boundary loops
        """
        vertices = np.array(vertices, dtype=float)
        triangles = np.array(triangles, dtype=np.int64)
        if vertices.ndim != 2 or vertices.shape[1] != 2 or len(vertices) < 3:
            raise MeshError("vertices must be an (n, 2) array with n >= 3")
        if triangles.ndim != 2 or triangles.shape[1] != 3 or len(triangles) == 0:
            raise MeshError("triangles must be a non-empty (m, 3) array")
        if triangles.min() < 0 or triangles.max() >= len(vertices):
            raise MeshError("triangle references a missing vertex")

        signed = _signed_areas(vertices, triangles)
        scale = float(np.ptp(vertices, axis=0).max()) ** 2
        small = np.abs(signed) <= AREA_TOLERANCE * scale
        if np.any(small):
            bad = int(np.flatnonzero(small)[0])
            raise MeshError(f"degenerate triangle {bad} (area {signed[bad]:.3e})")
        flip = signed < 0
        triangles[flip] = triangles[flip][:, [0, 2, 1]]

        used = np.zeros(len(vertices), dtype=bool)
        used[triangles.ravel()] = True
        if not used.all():
            raise MeshError(f"{int((~used).sum())} vertices belong to no triangle")

        directed = np.concatenate([triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]])
        if len(np.unique(directed, axis=0)) != len(directed):
            raise MeshError("inconsistent triangle orientation (repeated directed edge)")
        undirected = np.sort(directed, axis=1)
        edges, inverse, counts = np.unique(undirected, axis=0, return_inverse=True, return_counts=True)
        inverse = inverse.reshape(-1)
        if counts.max() > 2:
            raise MeshError("non-manifold edge shared by more than two triangles")

        self._vertices = _readonly(vertices)
        self._triangles = _readonly(triangles)
        self._edges = _readonly(edges)

        traced = self._trace_loops(directed[counts[inverse] == 1])
        if boundary_loops is not None:
            traced = self._match_loops(boundary_loops, traced)
        self._loops = tuple(_readonly(np.array(loop, dtype=np.int64)) for loop in traced)

        boundary_vertices = np.concatenate(self._loops) if self._loops else np.zeros(0, np.int64)
        self._boundary_vertices = _readonly(boundary_vertices)
        index = np.full(len(vertices), -1, dtype=np.int64)
        index[boundary_vertices] = np.arange(len(boundary_vertices))
        self._boundary_index = _readonly(index)
        flags = np.full(len(vertices), INTERIOR, dtype=np.int64)
        flags[boundary_vertices] = BOUNDARY
        self._flags = _readonly(flags)

        logger.debug("mesh: %d vertices, %d triangles, %d boundary loops",
                     len(vertices), len(triangles), len(self._loops))

    def _trace_loops(self, boundary_directed):
        successor = {}
        for a, b in boundary_directed:
            a, b = int(a), int(b)
            if a in successor:
                raise MeshError(f"boundary vertex {a} has two outgoing boundary edges")
            successor[a] = b
        loops = []
        visited = set()
        for start in sorted(successor):
            if start in visited:
                continue
            loop = [start]
            visited.add(start)
            v = successor[start]
            while v != start:
                if v in visited or v not in successor:
                    raise MeshError(f"boundary chain through vertex {v} is not closed")
                loop.append(v)
                visited.add(v)
                v = successor[v]
            loops.append(loop)
        loops.sort(key=lambda loop: -abs(_polygon_area(self._vertices[loop])))
        return loops

    @staticmethod
    def _match_loops(given_loops, traced):
        matched = []
        remaining = list(traced)
        for given in given_loops:
            given = [int(v) for v in given]
            for candidate in remaining:
                loop = _cyclic_match(given, candidate)
                if loop is not None:
                    matched.append(loop)
                    remaining.remove(candidate)
                    break
            else:
                raise MeshError("boundary loop does not match the triangle topology")
        if remaining:
            raise MeshError(f"{len(remaining)} boundary loops missing from the loop list")
        return matched

    # ------------------------------------------------------------------
    # topology

    @property
    def vertices(self):
        return self._vertices

    @property
    def triangles(self):
        return self._triangles

    @property
    def edges(self):
        return self._edges

    @property
    def boundary_loops(self):
        return self._loops

    @property
    def boundary_vertices(self):
        """Boundary vertex indices, loop after loop; the BoundaryField order."""
        return self._boundary_vertices

    @property
    def boundary_index(self):
        """Position of each vertex in ``boundary_vertices`` (-1 for interior)."""
        return self._boundary_index

    @property
    def vertex_flags(self):
        return self._flags

    @property
    def n_vertices(self):
        return len(self._vertices)

    @property
    def n_triangles(self):
        return len(self._triangles)

    @property
    def n_boundary(self):
        return len(self._boundary_vertices)

    @cached_property
    def interior_vertices(self):
        return _readonly(np.flatnonzero(self._flags == INTERIOR))

    @cached_property
    def loop_ids(self):
        """Loop number of every boundary vertex, in BoundaryField order."""
        ids = np.concatenate([np.full(len(loop), i) for i, loop in enumerate(self._loops)])
        return _readonly(ids.astype(np.int64))

    @cached_property
    def boundary_edges(self):
        """(k, 2) vertex pairs of boundary edges, domain on the left."""
        pairs = [np.column_stack([loop, np.roll(loop, -1)]) for loop in self._loops]
        return _readonly(np.concatenate(pairs))

    @cached_property
    def adjacency(self):
        n = self.n_vertices
        i, j = self._edges[:, 0], self._edges[:, 1]
        data = np.ones(2 * len(i))
        matrix = sp.coo_matrix((data, (np.concatenate([i, j]), np.concatenate([j, i]))), shape=(n, n))
        return matrix.tocsr()

    # ------------------------------------------------------------------
    # metric quantities

    @cached_property
    def triangle_areas(self):
        return _readonly(_signed_areas(self._vertices, self._triangles))

    @cached_property
    def basis_gradients(self):
        """(m, 3, 2) gradients of the barycentric hat functions per triangle."""
        p = self._vertices[self._triangles]
        grads = np.empty_like(p)
        two_area = 2.0 * self.triangle_areas
        for i in range(3):
            edge = p[:, (i + 2) % 3] - p[:, (i + 1) % 3]
            grads[:, i, 0] = -edge[:, 1] / two_area
            grads[:, i, 1] = edge[:, 0] / two_area
        return _readonly(grads)

    @cached_property
    def vertex_areas(self):
        """Lumped vertex areas; they sum to the mesh area."""
        areas = np.zeros(self.n_vertices)
        np.add.at(areas, self._triangles.ravel(), np.repeat(self.triangle_areas / 3.0, 3))
        return _readonly(areas)

    @cached_property
    def boundary_edge_lengths(self):
        e = self.boundary_edges
        return _readonly(np.linalg.norm(self._vertices[e[:, 1]] - self._vertices[e[:, 0]], axis=1))

    @cached_property
    def boundary_lengths(self):
        """Lumped boundary lengths per boundary vertex (BoundaryField order)."""
        lengths = np.zeros(self.n_boundary)
        e = self._boundary_index[self.boundary_edges]
        half = 0.5 * self.boundary_edge_lengths
        np.add.at(lengths, e[:, 0], half)
        np.add.at(lengths, e[:, 1], half)
        return _readonly(lengths)

    @property
    def area(self):
        return float(self.triangle_areas.sum())

    def boundary_length(self, loop=None):
        lengths = self.boundary_lengths
        if loop is None:
            return float(lengths.sum())
        return float(lengths[self.loop_ids == self._check_loop(loop)].sum())

    @cached_property
    def edge_lengths(self):
        return _readonly(np.linalg.norm(self._vertices[self._edges[:, 1]] - self._vertices[self._edges[:, 0]], axis=1))

    def max_edge_length(self):
        return float(self.edge_lengths.max())

    def incident_edge_lengths(self, vertex):
        row = self.adjacency.getrow(int(vertex))
        neighbours = row.indices
        return np.linalg.norm(self._vertices[neighbours] - self._vertices[int(vertex)], axis=1)

    def euler_characteristic(self):
        return self.n_vertices - len(self._edges) + self.n_triangles

    # ------------------------------------------------------------------
    # fields and quadrature

    def check_field(self, field, name="field"):
        field = np.asarray(field, dtype=float)
        if field.shape != (self.n_vertices,):
            raise PreconditionError(f"{name} has shape {field.shape}, expected ({self.n_vertices},)")
        return field

    def check_boundary_field(self, field, name="boundary field"):
        field = np.asarray(field, dtype=float)
        if field.shape != (self.n_boundary,):
            raise PreconditionError(f"{name} has shape {field.shape}, expected ({self.n_boundary},)")
        return field

    def _check_loop(self, loop):
        if not 0 <= int(loop) < len(self._loops):
            raise PreconditionError(f"loop index {loop} out of range (mesh has {len(self._loops)} loops)")
        return int(loop)

    def integrate(self, field):
        return float(self.vertex_areas @ self.check_field(field))

    def boundary_integrate(self, field, loop=None):
        field = self.check_boundary_field(field)
        weights = self.boundary_lengths
        if loop is not None:
            weights = np.where(self.loop_ids == self._check_loop(loop), weights, 0.0)
        return float(weights @ field)

    def mean(self, field):
        return self.integrate(field) / self.area

    def restrict_to_boundary(self, field):
        return self.check_field(field)[self._boundary_vertices]

    def extend_boundary(self, field):
        """Scatter a boundary field to a vertex field that vanishes inside."""
        out = np.zeros(self.n_vertices)
        out[self._boundary_vertices] = self.check_boundary_field(field)
        return out

    # ------------------------------------------------------------------
    # point queries

    @cached_property
    def _vertex_tree(self):
        return cKDTree(self._vertices)

    @cached_property
    def _centroid_tree(self):
        return cKDTree(self._vertices[self._triangles].mean(axis=1))

    def nearest_vertex(self, point):
        distance, index = self._vertex_tree.query(np.asarray(point, dtype=float))
        return int(index), float(distance)

    def vertices_within(self, point, radius):
        return np.array(sorted(self._vertex_tree.query_ball_point(np.asarray(point, dtype=float), radius)),
                        dtype=np.int64)

    def vertex_balls(self, centers, radius):
        """Vertex indices within radius of each centre, one array per centre."""
        balls = self._vertex_tree.query_ball_point(np.atleast_2d(np.asarray(centers, dtype=float)), radius)
        return [np.asarray(ball, dtype=np.int64) for ball in balls]

    def _barycentric(self, candidates, points):
        p = self._vertices[self._triangles[candidates]]
        e1 = p[..., 1, :] - p[..., 0, :]
        e2 = p[..., 2, :] - p[..., 0, :]
        d = points[:, None, :] - p[..., 0, :]
        det = e1[..., 0] * e2[..., 1] - e1[..., 1] * e2[..., 0]
        l1 = (d[..., 0] * e2[..., 1] - d[..., 1] * e2[..., 0]) / det
        l2 = (e1[..., 0] * d[..., 1] - e1[..., 1] * d[..., 0]) / det
        return np.stack([1.0 - l1 - l2, l1, l2], axis=-1)

    def locate(self, points):
        """
        Find the triangle containing each point.

        Args:
            points: (N, 2) array

        Returns:
            tuple: (triangle indices (N,), barycentric coordinates (N, 3));
            points outside the mesh get the closest triangle
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        k = min(16, self.n_triangles)
        _, candidates = self._centroid_tree.query(points, k=k)
        candidates = np.asarray(candidates).reshape(len(points), -1)
        bary = self._barycentric(candidates, points)
        best = bary.min(axis=2).argmax(axis=1)
        rows = np.arange(len(points))
        triangles = candidates[rows, best]
        coords = bary[rows, best]
        missed = np.flatnonzero(coords.min(axis=1) < -1e-10)
        if len(missed):
            everything = np.broadcast_to(np.arange(self.n_triangles), (len(missed), self.n_triangles))
            full = self._barycentric(everything, points[missed])
            pick = full.min(axis=2).argmax(axis=1)
            triangles[missed] = pick
            coords[missed] = full[np.arange(len(missed)), pick]
        return triangles, coords

    def interpolate(self, field, points):
        """Evaluate a piecewise-linear vertex field (or (n, d) stack) at points."""
        field = np.asarray(field, dtype=float)
        triangles, coords = self.locate(points)
        values = field[self._triangles[triangles]]
        if values.ndim == 2:
            return np.einsum("ij,ij->i", values, coords)
        return np.einsum("ijk,ij->ik", values, coords)

    # ------------------------------------------------------------------
    # derived meshes

    def relabel(self, order):
        """
        Return the mesh with vertices renumbered so that new vertex ``i`` is
        old vertex ``order[i]``. Fields follow with ``field[order]``.
        """
        order = np.asarray(order, dtype=np.int64)
        if sorted(order.tolist()) != list(range(self.n_vertices)):
            raise PreconditionError("relabel order must be a permutation of the vertices")
        inverse = np.empty_like(order)
        inverse[order] = np.arange(len(order))
        loops = [inverse[loop] for loop in self._loops]
        return TriangleMesh(self._vertices[order], inverse[self._triangles], boundary_loops=loops)

    def rotated(self, angle, center=(0.0, 0.0)):
        """Rigidly rotated copy with identical numbering."""
        c, s = np.cos(angle), np.sin(angle)
        rotation = np.array([[c, -s], [s, c]])
        center = np.asarray(center, dtype=float)
        vertices = (self._vertices - center) @ rotation.T + center
        return TriangleMesh(vertices, self._triangles, boundary_loops=self._loops)


def euler_characteristic(mesh):
    """V - E + F of the mesh."""
    return mesh.euler_characteristic()


def integrate(field, mesh):
    """Piecewise-linear quadrature of a vertex field over the mesh."""
    return mesh.integrate(field)


def boundary_integrate(field, mesh, loop=None):
    """Piecewise-linear quadrature of a boundary field, optionally on one loop."""
    return mesh.boundary_integrate(field, loop=loop)
