#!/usr/bin/env python
"""
Empirical probes of the Trudinger-Moser inequalities along bubble families.

Along a family u_j the probe reports the increments of the log-mass against
the increments of the Dirichlet energy scaled by the sharp constant,

    (L(u_j) - L(u_0)) / (c (E(u_j) - E(u_0))),

which stays below one (up to lower order terms) when the inequality holds
with constant c.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from asymptotics.bubbles import bubble
from asymptotics.concentration import local_mass
from elliptic.context import get_context
from errors import PreconditionError
from functional.energy import masses
from singular.structure import singular_chi, trudinger_tau

logger = logging.getLogger(__name__)

INTERIOR = "interior"
BOUNDARY = "boundary"
COMBINED = "combined"
LOCAL = "local"
PROBES = (INTERIOR, BOUNDARY, COMBINED, LOCAL)
DEFAULT_EPS_PROBE = 0.1


@dataclass(frozen=True)
class BubbleFamily:
    """Bubbles at a barycenter for increasing Lambda, optionally adapted to a conical order."""

    sigma: object
    lambdas: tuple
    alpha: float = 0.0

    def fields(self, mesh):
        return [bubble(self.sigma, L, mesh, alpha=self.alpha) for L in self.lambdas]


@dataclass(frozen=True)
class ProbeReport:
    which: str
    constant: float
    ratios: tuple
    ratio: float
    eps_probe: float
    lambdas: tuple = field(default_factory=tuple)

    @property
    def passed(self):
        return self.ratio <= 1.0 + self.eps_probe


def probe_constant(which, tau, alpha=0.0):
    """The constant c multiplying the Dirichlet energy."""
    if which == INTERIOR:
        return 1.0 / (8.0 * tau * math.pi)
    if which in (BOUNDARY, COMBINED):
        return 1.0 / (16.0 * tau * math.pi)
    if which == LOCAL:
        return 1.0 / (16.0 * math.pi * min(1.0, 1.0 + alpha))
    raise PreconditionError(f"unknown probe '{which}'")


def _log_mass(u, data, mesh, which, lam, center, radius):
    A, B = masses(u, data, mesh)
    if which == INTERIOR:
        value = A
    elif which == BOUNDARY:
        value = B
    elif which == COMBINED:
        value = math.sqrt(max(B * B + 2.0 * lam * A, 0.0)) + B
    else:
        value = 0.5 * local_mass(u, data, mesh, center, radius)[0]
    if not value > 0:
        raise PreconditionError(f"{which} mass is not positive along the family")
    return math.log(value)


def tm_probe_fields(fields, data, mesh, which, lam=None, alpha=0.0, center=None, radius=0.25,
                    eps_probe=DEFAULT_EPS_PROBE, context=None):
    """
    Probe an arbitrary family of mean-zero fields.

    Raises:
        PreconditionError: when the Dirichlet energy does not grow along the family
    """
    if which not in PROBES:
        raise PreconditionError(f"unknown probe '{which}'")
    if len(fields) < 2:
        raise PreconditionError("a probe family needs at least two fields")
    context = context or get_context(mesh)
    tau = trudinger_tau(data.sing)
    if lam is None:
        lam = 4.0 * math.pi * singular_chi(mesh, data.sing)
    constant = probe_constant(which, tau, alpha)
    energies = [context.operators.dirichlet(u) for u in fields]
    logs = [_log_mass(u, data, mesh, which, lam, center, radius) for u in fields]
    ratios = []
    for energy, log_mass in zip(energies[1:], logs[1:]):
        growth = energy - energies[0]
        if not growth > 1e-12 * (1.0 + abs(energies[0])):
            raise PreconditionError("degenerate family: the Dirichlet energy does not grow")
        ratios.append((log_mass - logs[0]) / (constant * growth))
    ratio = float(max(ratios))
    logger.info("Trudinger-Moser probe (%s): constant %.6g, ratio %.4f", which, constant, ratio)
    return ProbeReport(which, constant, tuple(ratios), ratio, eps_probe)


def tm_probe(data, mesh, family, which, lam=None, radius=0.25, eps_probe=DEFAULT_EPS_PROBE, context=None):
    """
    Probe a bubble family.

    Args:
        data (CurvatureData): curvatures
        mesh (TriangleMesh): the mesh
        family (BubbleFamily): bubbles with growing Lambda
        which (str): 'interior', 'boundary', 'combined' or 'local'
        lam (float): parameter of the combined probe (default 4 pi chi)
        radius (float): ball radius of the local probe around the first atom

    Returns:
        ProbeReport: incremental ratios, their supremum and the verdict
    """
    center = np.asarray(family.sigma.points[0])
    report = tm_probe_fields(family.fields(mesh), data, mesh, which, lam=lam, alpha=family.alpha,
                             center=center, radius=radius, eps_probe=eps_probe, context=context)
    return ProbeReport(report.which, report.constant, report.ratios, report.ratio, report.eps_probe,
                       tuple(float(L) for L in family.lambdas))
