#!/usr/bin/env python
"""
Sweeps of the minimizer over lambda and over the perturbation parameter mu.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from asymptotics.concentration import concentration_points
from elliptic.context import get_context
from errors import LiouvilleError, PreconditionError
from functional.energy import EnergyParams
from singular.structure import gamma_distance
from solver.minimizer import DIVERGING_ENERGY, SolverOptions, minimize

logger = logging.getLogger(__name__)

DEFAULT_CONCENTRATION_RADIUS = 0.1
MU_RANGE = (0.9, 1.1)


@dataclass(frozen=True)
class SweepPoint:
    """One lambda of a sweep with its blow-up annotations."""

    lam: float
    report: object
    gamma_distance: float
    max_u: float
    concentration: object = None

    @property
    def converged(self):
        return self.report is not None and self.report.converged

    @property
    def status(self):
        return self.report.status if self.report is not None else "failed"


def _is_sorted(grid):
    steps = np.diff(grid)
    return bool(np.all(steps > 0) or np.all(steps < 0))


def _annotate(lam, report, data, mesh, concentration_radius):
    distance = gamma_distance(lam, data.sing)
    if report is None:
        return SweepPoint(lam, None, distance, float("nan"))
    concentration = None
    if not report.converged:
        try:
            concentration = concentration_points(report.state.u, data, mesh, 1, concentration_radius)
        except PreconditionError:
            logger.warning("no concentration summary at lambda=%.6g", lam)
        logger.warning("lambda=%.6g did not converge (%s), distance to Gamma %.4g",
                       lam, report.status, distance)
    return SweepPoint(lam, report, distance, report.max_u, concentration)


def _solve_point(lam, mu, data, mesh, group, options, initial, context):
    try:
        return minimize(data, EnergyParams(lam, mu), mesh, group, options, initial, context)
    except LiouvilleError as e:
        logger.warning("lambda=%.6g failed: %s", lam, e)
        return None


def lambda_sweep(data, mesh, grid, mu=1.0, warm_start=True, options=None, group=None, threads=1,
                 concentration_radius=DEFAULT_CONCENTRATION_RADIUS, initial=None):
    """
    Minimize at every lambda of a monotone grid.

    With ``warm_start`` each solve starts from the previous converged field
    when that field is admissible for the next lambda; without it the points
    are independent and are solved on ``threads`` workers.

    Args:
        grid: strictly monotone lambda values
        initial: starting field for the first point (or every point when cold)

    Returns:
        list: one SweepPoint per lambda, failures included

    Raises:
        PreconditionError: when the grid is not monotone
    """
    grid = [float(lam) for lam in grid]
    if not grid:
        return []
    if len(grid) > 1 and not _is_sorted(grid):
        raise PreconditionError("lambda grid must be strictly monotone")
    options = options or SolverOptions()
    context = get_context(mesh)

    if warm_start:
        reports = []
        start = initial
        for lam in grid:
            report = _solve_point(lam, mu, data, mesh, group, options, start, context)
            if report is not None and report.converged:
                start = report.state.u
            reports.append(report)
            if report is None or report.status == DIVERGING_ENERGY:
                start = initial
    else:
        with ThreadPoolExecutor(max_workers=max(1, int(threads))) as executor:
            reports = list(executor.map(
                lambda lam: _solve_point(lam, mu, data, mesh, group, options, initial, context), grid))

    points = [_annotate(lam, report, data, mesh, concentration_radius) for lam, report in zip(grid, reports)]
    converged = sum(1 for p in points if p.converged)
    logger.info("lambda sweep: %d of %d points converged", converged, len(points))
    return points


def solve_perturbed(data, mesh, lam, mu_list, options=None, group=None, initial=None):
    """
    Minimize the mu-perturbed energy for every mu, warm-starting along the list.

    Raises:
        PreconditionError: when some mu lies outside [0.9, 1.1]
    """
    low, high = MU_RANGE
    if any(not low <= mu <= high for mu in mu_list):
        raise PreconditionError(f"mu values must lie in [{low}, {high}]")
    options = options or SolverOptions()
    context = get_context(mesh)
    reports = []
    start = initial
    for mu in mu_list:
        report = minimize(data, EnergyParams(lam, mu), mesh, group, options, start, context)
        if report.converged:
            start = report.state.u
        reports.append(report)
    return reports


def is_energy_nondecreasing(reports, tol=1e-8):
    """Whether the minimal energies of a mu-sweep (in increasing mu) never decrease beyond tol."""
    ordered = sorted(reports, key=lambda r: r.mu)
    energies = [r.energy for r in ordered]
    return all(b >= a - tol * (1.0 + abs(a)) for a, b in zip(energies, energies[1:]))
