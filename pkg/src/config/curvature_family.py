#!/usr/bin/env python
"""
Curvature families referenced from scenario files.

    constant:c                 c
    radial_poly:c0,c1,...      c0 + c1 r^2 + c2 r^4 + ...
    angular:a,m,b              a cos(m theta) + b
    table:file                 one value per vertex (or per boundary vertex for h)
"""
import logging
import os
from dataclasses import dataclass

import numpy as np

from errors import ConfigError

logger = logging.getLogger(__name__)

CONSTANT = "constant"
RADIAL_POLY = "radial_poly"
ANGULAR = "angular"
TABLE = "table"
KINDS = (CONSTANT, RADIAL_POLY, ANGULAR, TABLE)


@dataclass(frozen=True)
class CurvatureFamily:
    kind: str
    coefficients: tuple = ()
    path: str = None

    def __str__(self):
        if self.kind == TABLE:
            return f"{TABLE}:{self.path}"
        return f"{self.kind}:" + ",".join(repr(float(c)) for c in self.coefficients)

    def evaluate(self, points):
        """Values at an (n, 2) array of points (not for tables)."""
        points = np.asarray(points, dtype=float)
        x, y = points[:, 0], points[:, 1]
        if self.kind == CONSTANT:
            return np.full(len(points), self.coefficients[0])
        if self.kind == RADIAL_POLY:
            # coefficients in increasing powers of r^2
            return np.polynomial.polynomial.polyval(x * x + y * y, self.coefficients)
        if self.kind == ANGULAR:
            a, m, b = self.coefficients
            return a * np.cos(m * np.arctan2(y, x)) + b
        raise ConfigError(f"a {self.kind} family has no closed form")

    def _table(self):
        try:
            return np.atleast_1d(np.loadtxt(self.path, dtype=float, comments="#"))
        except (OSError, ValueError) as e:
            raise ConfigError(f"cannot read curvature table {self.path}: {e}")

    def on_vertices(self, mesh):
        if self.kind != TABLE:
            return self.evaluate(mesh.vertices)
        values = self._table()
        if len(values) != mesh.n_vertices:
            raise ConfigError(f"table {self.path} has {len(values)} values for {mesh.n_vertices} vertices")
        return values

    def on_boundary(self, mesh):
        if self.kind != TABLE:
            return self.evaluate(mesh.vertices[mesh.boundary_vertices])
        values = self._table()
        if len(values) == mesh.n_boundary:
            return values
        if len(values) == mesh.n_vertices:
            return values[mesh.boundary_vertices]
        raise ConfigError(f"table {self.path} has {len(values)} values for {mesh.n_boundary} boundary vertices")


def parse_family(text, base_dir=".", line=None):
    """
    Parse a family description such as "radial_poly:1.0,0.5".

    Raises:
        ConfigError: on unknown kinds, malformed coefficients or missing tables
    """
    kind, sep, rest = text.strip().partition(":")
    if not sep or kind not in KINDS:
        raise ConfigError(f"curvature family '{text}' must be one of {', '.join(k + ':...' for k in KINDS)}", line)
    if kind == TABLE:
        path = rest.strip()
        if not os.path.isabs(path):
            path = os.path.abspath(os.path.join(base_dir, path))
        if not os.path.isfile(path):
            raise ConfigError(f"curvature table {path} does not exist", line)
        return CurvatureFamily(TABLE, (), path)
    try:
        coefficients = tuple(float(c) for c in rest.split(","))
    except ValueError:
        raise ConfigError(f"curvature family '{text}' has non-numeric coefficients", line)
    expected = {CONSTANT: 1, ANGULAR: 3}.get(kind)
    if expected is not None and len(coefficients) != expected:
        raise ConfigError(f"{kind} takes {expected} coefficient(s), got {len(coefficients)}", line)
    return CurvatureFamily(kind, coefficients)
