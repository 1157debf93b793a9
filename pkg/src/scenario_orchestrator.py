#!/usr/bin/env python
"""
Main orchestrator module for liouville-lab scenarios.
"""
import logging
import math
import os
import time

import numpy as np

from asymptotics import (Barycenter, BubbleFamily, boundary_barycenter, bubble_slopes, concentration_points,
                         energy_slope, morse_index, tm_probe)
from asymptotics.morse import DIRECT, MEAN_FIELD
from config import config_hash, emit_config
from diagnostics import ScenarioReport, classify_hypotheses, gauss_bonnet_residual
from elliptic import get_context
from errors import ConfigError, PreconditionError
from exporters import CSVExporter, ReportExporter
from functional import EnergyParams, admissible, masses
from geometry import build_annulus_mesh, build_disc_mesh, build_multihole_mesh, read_mesh
from limit import (ANNULUS_M, BOUNDARY_HZ, LOG_CAP_R, HeavyTailField, halfplane_residual, halfplane_solution,
                   instability_witness, plane_mass_exact, plane_residual, plane_solution, plane_total_mass,
                   z0_residual)
from singular import (SingularStructure, classify_surface, desingularize, gamma_distance, gamma_set, singular_chi,
                      trudinger_tau)
from solver import SolverOptions, lambda_sweep, minimize, rotation_group, seed_state, solve_perturbed

logger = logging.getLogger(__name__)

GAMMA_TABLE_CAP_MARGIN = 8.0 * math.pi
LIMIT_THRESHOLD = 1e-8
MASS_TOLERANCE = 1e-3


class ScenarioOrchestrator:
    """
    Main class to orchestrate building a scenario and running its studies.
    """

    def __init__(self, config, output_dir=None, threads=1, seed=None):
        """
        Initialize the orchestrator.

        Args:
            config (ScenarioConfig): The parsed scenario
            output_dir (str): Directory for reports and tables (default: the config's output_dir)
            threads (int): Workers for cold-started sweeps
            seed (int): Seed of randomized eigen-solves (default: the config's seed)
        """
        self.config = config
        self.output_dir = output_dir or config.run.output_dir
        self.threads = max(1, int(threads))
        self.seed = config.run.seed if seed is None else int(seed)
        self.config_hash = config_hash(config)
        self.csv_exporter = CSVExporter(self.output_dir)
        self.report_exporter = ReportExporter(self.output_dir)
        self.timing = {}

        self.mesh = None
        self.data = None
        self.group = None

    # ------------------------------------------------------------------
    # scenario construction

    def _marked_points(self):
        sing = self.config.singularities
        points = [(x, y) for x, y, _ in sing.interior] + [(x, y) for x, y, _ in sing.corners]
        extra = [p for p in (self.config.solver.seed_point, self.config.run.bubble_point) if p is not None]
        return points, extra

    def build_mesh(self):
        """
        Build or load the mesh of the configured surface.

        Returns:
            TriangleMesh: the mesh
        """
        surface = self.config.surface
        singular_points, extra = self._marked_points()
        grading = dict(grading_points=singular_points + extra or None, grading_rings=surface.grading_rings,
                       grading_ratio=surface.grading_ratio, grading_min_radius=surface.grading_min_radius)
        started = time.perf_counter()
        if surface.kind == "disc":
            mesh = build_disc_mesh(surface.radius, surface.refinement, symmetry_order=surface.symmetry_order,
                                   **grading)
        elif surface.kind == "annulus":
            mesh = build_annulus_mesh(surface.r_in, surface.r_out, surface.refinement,
                                      symmetry_order=surface.symmetry_order, **grading)
        elif surface.kind == "multihole":
            if surface.symmetry_order is not None:
                raise ConfigError("symmetry_order is not available for multihole surfaces")
            holes = [((x, y), r) for x, y, r in surface.holes]
            mesh = build_multihole_mesh(surface.radius, holes, surface.refinement, **grading)
        else:
            mesh = read_mesh(surface.mesh_file)
        self.timing["mesh"] = time.perf_counter() - started
        print(f"Mesh ready: {mesh.n_vertices} vertices, {mesh.n_triangles} triangles, "
              f"{len(mesh.boundary_loops)} boundary loop(s)")
        self.mesh = mesh
        return mesh

    def build_data(self):
        """
        Snap the singularities to the mesh and desingularize the curvatures.

        Raises:
            ConfigError: when a singular point is not a vertex or a corner is not on the boundary
        """
        mesh = self.mesh or self.build_mesh()
        sing = self.config.singularities
        try:
            structure = SingularStructure.from_points(mesh, sing.interior, sing.corners)
        except PreconditionError as e:
            raise ConfigError(f"singularities: {e}")
        K = self.config.K_family.on_vertices(mesh)
        h = self.config.h_family.on_boundary(mesh)
        started = time.perf_counter()
        self.data = desingularize(K, h, structure, mesh)
        self.timing["desingularize"] = time.perf_counter() - started
        order = self.config.solver.symmetry_order
        self.group = rotation_group(mesh, order) if order else None
        return self.data

    def _ensure(self):
        if self.data is None:
            self.build_data()
        return self.mesh, self.data

    @property
    def chi(self):
        mesh, data = self._ensure()
        return singular_chi(mesh, data.sing)

    @property
    def lam(self):
        return 4.0 * math.pi * self.chi if self.config.run.lam is None else self.config.run.lam

    def solver_options(self):
        s = self.config.solver
        return SolverOptions(tol_grad=s.tol_grad, tol_pde=s.tol_pde, max_iter=s.max_iter, step0=s.step0,
                             armijo_c=s.armijo_c, divergence_floor=s.divergence_floor, lambda_max=s.lambda_max)

    def initial_field(self, lam):
        """Zero when admissible, otherwise the configured seed."""
        mesh, data = self._ensure()
        s = self.config.solver
        if s.seed_kind == "zero":
            u = seed_state("zero", mesh)
            A, B = masses(u, data, mesh)
            if not admissible(A, B, lam):
                raise PreconditionError("u = 0 is not admissible for this scenario; "
                                        "configure seed_kind = bubble or boundary_layer")
            return u
        return seed_state(s.seed_kind, mesh, point=s.seed_point, Lambda=s.seed_lambda)

    # ------------------------------------------------------------------
    # subcommands

    def info(self):
        """
        Characteristic, Trudinger constant, classification, quantized set and hypotheses.

        Returns:
            dict: the computed values
        """
        mesh, data = self._ensure()
        chi, tau = self.chi, trudinger_tau(data.sing)
        classification = classify_surface(chi, tau)
        gamma = gamma_set(data.sing, max(self.lam, 0.0) + GAMMA_TABLE_CAP_MARGIN)
        hypotheses = classify_hypotheses(data, mesh, chi, lam=self.lam, group=self.group)
        print(f"classification={classification} chi={chi!r} tau={tau!r}")
        print(f"gamma={','.join(format(g, '.12g') for g in gamma)}")
        print(f"hypotheses={','.join(hypotheses.satisfied) or 'none'}")
        for note in hypotheses.notes:
            print(f"note={note}")
        print(emit_config(self.config))
        self.csv_exporter.write_csv_file(self.csv_exporter.get_default_filenames()["gamma"],
                                         self.csv_exporter.get_csv_headers()["gamma"],
                                         [{"value": g} for g in gamma], self.config_hash)
        return {"chi": chi, "tau": tau, "classification": classification, "gamma": gamma,
                "hypotheses": hypotheses}

    def solve(self):
        """
        Minimize at the configured lambda and certify the result.

        Returns:
            ScenarioReport: the report, also written to report.json
        """
        mesh, data = self._ensure()
        chi, tau, lam = self.chi, trudinger_tau(data.sing), self.lam
        params = EnergyParams(lam)
        context = get_context(mesh)
        print(f"Solving at lambda={lam!r} on {mesh.n_vertices} vertices")
        started = time.perf_counter()
        solve = minimize(data, params, mesh, self.group, self.solver_options(), self.initial_field(lam), context)
        self.timing["solve"] = time.perf_counter() - started

        report = ScenarioReport(chi, tau, classify_surface(chi, tau), lam, gamma_distance(lam, data.sing),
                                solve=solve.summary(), timing=self.timing)
        report.hypotheses = classify_hypotheses(data, mesh, chi, lam=lam, group=self.group)
        u = solve.state.u
        try:
            report.concentration = concentration_points(u, data, mesh, 1, self.config.run.concentration_radius).summary()
        except PreconditionError as e:
            logger.warning("no concentration summary: %s", e)
        if solve.converged:
            if abs(lam - 4.0 * math.pi * chi) <= 1e-12 * (1.0 + abs(lam)):
                report.gauss_bonnet_residual = gauss_bonnet_residual(solve.state, data, mesh, chi)
            started = time.perf_counter()
            cap, tol = self.config.solver.index_cap, self.config.solver.tol_eig
            report.morse_mean_field = morse_index(u, data, params, mesh, MEAN_FIELD, tol, cap, context=context,
                                                  seed=self.seed)
            report.morse_direct = morse_index(u, data, params, mesh, DIRECT, tol, cap, context=context,
                                              seed=self.seed)
            self.timing["morse"] = time.perf_counter() - started

        if self.config.run.mu_list != (1.0,):
            self.perturbed(lam, u if solve.converged else None)
        self.report_exporter.write_report(report, self.config_hash)
        print(f"status={solve.status} energy={solve.energy!r} iterations={solve.iterations}")
        return report, solve

    def perturbed(self, lam, initial=None):
        """mu-perturbed minimizations written to perturbed.csv."""
        mesh, data = self._ensure()
        context = get_context(mesh)
        start = initial if initial is not None else self.initial_field(lam)
        reports = solve_perturbed(data, mesh, lam, sorted(self.config.run.mu_list), self.solver_options(),
                                  self.group, start)
        rows = [{"mu": r.mu, "status": r.status, "energy": r.energy, "gradient_norm": r.gradient_norm,
                 "dirichlet_energy": 0.5 * context.operators.dirichlet(r.state.u)} for r in reports]
        self.csv_exporter.export_tables({"perturbed": rows}, self.config_hash)
        return reports

    def sweep(self):
        """
        lambda continuation over the configured grid.

        Returns:
            list: SweepPoint per lambda, also written to sweep.csv
        """
        mesh, data = self._ensure()
        grid = self.config.run.lambda_grid
        if not grid:
            raise ConfigError("the sweep needs [run] lambda_grid")
        initial = self.initial_field(grid[0])
        started = time.perf_counter()
        points = lambda_sweep(data, mesh, grid, warm_start=self.config.run.warm_start,
                              options=self.solver_options(), group=self.group, threads=self.threads,
                              concentration_radius=self.config.run.concentration_radius, initial=initial)
        self.timing["sweep"] = time.perf_counter() - started
        rows = []
        for point in points:
            report = point.report
            concentration = point.concentration
            centre = concentration.points[0] if concentration is not None and concentration.points else (None, None)
            rows.append({
                "lambda": point.lam,
                "status": point.status,
                "energy": report.energy if report else float("nan"),
                "gradient_norm": report.gradient_norm if report else float("nan"),
                "pde_residual_interior": report.pde_residual_interior if report else float("nan"),
                "pde_residual_boundary": report.pde_residual_boundary if report else float("nan"),
                "C": report.C_value if report else float("nan"),
                "max_u": point.max_u,
                "gamma_distance": point.gamma_distance,
                "captured_fraction": concentration.captured_fraction if concentration is not None else None,
                "concentration_x": centre[0],
                "concentration_y": centre[1],
                "iterations": report.iterations if report else None,
            })
        self.csv_exporter.export_tables({"sweep": rows}, self.config_hash)
        return points

    def _bubble_center(self):
        """Barycenter of the bubble family, whether it sits on the boundary, and its conical order."""
        mesh, data = self._ensure()
        point = self.config.run.bubble_point
        if point is None:
            return boundary_barycenter(mesh, loop=0, points=1), True, 0.0
        vertex, _ = mesh.nearest_vertex(point)
        on_boundary = bool(mesh.vertex_flags[vertex])
        alpha = 0.0 if on_boundary else data.sing.alpha_at(vertex)
        return Barycenter.single(tuple(mesh.vertices[vertex])), on_boundary, alpha

    def bubbles(self):
        """
        Energy slopes of the bubble family and of the test-function energy.

        Returns:
            list: rows written to bubbles.csv
        """
        mesh, data = self._ensure()
        sigma, on_boundary, alpha = self._bubble_center()
        lambdas = self.config.run.bubble_lambdas
        slopes = bubble_slopes(sigma, lambdas, data, mesh, alpha=alpha)
        if on_boundary:
            targets = (8.0 * math.pi, 2.0, 1.0)
        else:
            targets = (16.0 * math.pi * (1.0 + alpha), 2.0 * (1.0 + alpha), 0.0)
        used = ";".join(repr(L) for L in slopes.used)
        excluded = ";".join(repr(L) for L in slopes.excluded)
        rows = [{"quantity": name, "slope": value, "target": target, "used_lambdas": used,
                 "excluded_lambdas": excluded}
                for name, value, target in zip(("dirichlet", "interior_mass", "boundary_mass"),
                                               slopes[:3], targets)]
        try:
            lam = self.lam
            target = 8.0 * math.pi - 2.0 * lam if on_boundary else (1.0 + alpha) * (16.0 * math.pi - 2.0 * lam)
            slope = energy_slope(sigma, lambdas, lam, data, mesh, alpha=alpha)
            rows.append({"quantity": "test_function_energy", "slope": slope,
                         "target": target, "used_lambdas": used, "excluded_lambdas": excluded})
        except PreconditionError as e:
            logger.warning("test-function energy not evaluated: %s", e)
        self.csv_exporter.export_tables({"bubbles": rows}, self.config_hash)
        return rows

    def probe(self):
        """
        Trudinger-Moser ratios along the bubble family.

        Returns:
            ProbeReport: also written to probe.csv
        """
        mesh, data = self._ensure()
        sigma, _, alpha = self._bubble_center()
        family = BubbleFamily(sigma, tuple(self.config.run.bubble_lambdas), alpha)
        result = tm_probe(data, mesh, family, self.config.run.probe, lam=self.lam,
                          radius=self.config.run.concentration_radius)
        rows = [{"probe": result.which, "lambda_bubble": L, "ratio": ratio, "constant": result.constant,
                 "passed": ratio <= 1.0 + result.eps_probe}
                for L, ratio in zip(result.lambdas[1:], result.ratios)]
        self.csv_exporter.export_tables({"probe": rows}, self.config_hash)
        print(f"probe={result.which} ratio={result.ratio!r} passed={str(result.passed).lower()}")
        return result

    def limit(self):
        """
        Residuals, masses and instability witnesses of the canonical limit solutions.

        Returns:
            list: rows written to limit.csv
        """
        run = self.config.run
        K0, alpha, h0 = run.limit_K0, run.limit_alpha, run.limit_h0
        rows = []

        def check(name, value, threshold, passed=None):
            passed = value < threshold if passed is None else passed
            rows.append({"check": name, "value": value, "threshold": threshold, "passed": passed})

        plane = plane_solution(K0, alpha, 1.0)
        radii = np.geomspace(0.1, 10.0, 41)
        theta = np.linspace(0.0, 2.0 * math.pi, 12, endpoint=False)
        polar = np.array([(r * math.cos(t), r * math.sin(t)) for r in radii for t in theta])
        check("plane_residual", plane_residual(plane, polar), LIMIT_THRESHOLD)
        mass, exact = plane_total_mass(plane, 1e4), 8.0 * math.pi * (1.0 + alpha)
        check("plane_total_mass_relative_error", abs(mass - exact) / exact, MASS_TOLERANCE)
        check("plane_mass_quadrature_error", abs(mass - plane_mass_exact(plane, 1e4)) / exact, LIMIT_THRESHOLD)

        s, t = np.meshgrid(np.linspace(-10.0, 10.0, 41), np.linspace(0.0, 10.0, 21))
        box = np.column_stack([s.ravel(), t.ravel()])
        half = halfplane_solution(K0, h0)
        interior, neumann = halfplane_residual(half, box)
        check("halfplane_interior_residual", interior, LIMIT_THRESHOLD)
        check("halfplane_neumann_residual", neumann, LIMIT_THRESHOLD)
        if h0 < 0:
            z_interior, z_boundary = z0_residual(K0, h0, box)
            check("z0_interior_residual", z_interior, LIMIT_THRESHOLD)
            check("z0_boundary_residual", z_boundary, LIMIT_THRESHOLD)

        for name, sol, kind, expect in (("plane", plane, LOG_CAP_R, True),
                                        ("halfplane", half, LOG_CAP_R, True),
                                        ("plane", plane, ANNULUS_M, False),
                                        ("heavy_tail", HeavyTailField(K0), ANNULUS_M, True)):
            result = instability_witness(sol, kind)
            check(f"{name}_{kind}_Q", result.Q_value, 0.0, passed=result.certified == expect)
        if h0 < 0:
            result = instability_witness(half, BOUNDARY_HZ)
            check(f"halfplane_{BOUNDARY_HZ}_Q", result.Q_value, 0.0, passed=result.certified)

        self.csv_exporter.export_tables({"limit": rows}, self.config_hash)
        failed = [row["check"] for row in rows if not row["passed"]]
        print(f"limit checks={len(rows)} failed={len(failed)}")
        return rows

    def output_path(self, name):
        return os.path.join(self.output_dir, name)
