#!/usr/bin/env python
"""
Unit tests for ScenarioOrchestrator class.
"""
import math
from types import SimpleNamespace
from unittest.mock import Mock, patch

import numpy as np
import pytest

from asymptotics import BubbleSlopes
from config import parse_config_text
from errors import ConfigError, PreconditionError
from exporters import read_report
from scenario_orchestrator import ScenarioOrchestrator

DISC = """\
[surface]
kind = disc
refinement = 0
"""


def make_orchestrator(tmp_path, text=DISC, **kwargs):
    return ScenarioOrchestrator(parse_config_text(text, base_dir=str(tmp_path)), output_dir=str(tmp_path), **kwargs)


def read_rows(path):
    lines = path.read_text().splitlines()
    header = lines[1].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[2:]]


class TestScenarioOrchestrator:
    """Test cases for ScenarioOrchestrator class."""

    def test_init(self, tmp_path):
        """Test ScenarioOrchestrator initialization."""
        orchestrator = make_orchestrator(tmp_path, threads=0)
        assert orchestrator.output_dir == str(tmp_path)
        assert orchestrator.threads == 1
        assert orchestrator.seed == 0
        assert len(orchestrator.config_hash) == 64
        assert orchestrator.mesh is None
        assert orchestrator.data is None
        assert orchestrator.group is None

    def test_output_dir_from_config(self, tmp_path):
        config = parse_config_text("[run]\noutput_dir = results\nseed = 5\n")
        orchestrator = ScenarioOrchestrator(config, seed=None)
        assert orchestrator.output_dir == "results"
        assert orchestrator.seed == 5
        assert orchestrator.output_path("report.json") == "results/report.json"

    @patch('scenario_orchestrator.build_disc_mesh')
    def test_build_mesh_grades_marked_points(self, mock_build, tmp_path, capsys):
        """Test that singular points and the bubble point are graded."""
        mock_build.return_value = Mock(n_vertices=10, n_triangles=12, boundary_loops=[np.arange(6)])
        text = DISC + "[singularities]\ninterior = 0.0:0.0:-0.5\n[run]\nbubble_point = 0.5,0.0\n"
        orchestrator = make_orchestrator(tmp_path, text)

        mesh = orchestrator.build_mesh()

        assert mesh is mock_build.return_value
        args, kwargs = mock_build.call_args
        assert args == (1.0, 0)
        assert kwargs["grading_points"] == [(0.0, 0.0), (0.5, 0.0)]
        assert kwargs["symmetry_order"] is None
        assert "Mesh ready: 10 vertices, 12 triangles, 1 boundary loop(s)" in capsys.readouterr().out
        assert "mesh" in orchestrator.timing

    def test_multihole_has_no_symmetry(self, tmp_path):
        text = "[surface]\nkind = multihole\nholes = 0.4:0.0:0.15\nsymmetry_order = 2\n"
        with pytest.raises(ConfigError, match="symmetry_order"):
            make_orchestrator(tmp_path, text).build_mesh()

    def test_build_data(self, tmp_path):
        """Test the desingularized data and the characteristic."""
        text = DISC + "[singularities]\ninterior = 0.0:0.0:-0.5\n"
        orchestrator = make_orchestrator(tmp_path, text)
        data = orchestrator.build_data()
        assert len(data.sing.interior) == 1
        assert orchestrator.chi == pytest.approx(0.5)
        assert orchestrator.lam == pytest.approx(2.0 * math.pi)

    def test_corner_off_the_boundary(self, tmp_path):
        text = DISC + "[singularities]\ncorners = 0.0:0.0:0.5\n"
        with pytest.raises(ConfigError, match="singularities: "):
            make_orchestrator(tmp_path, text).build_data()

    def test_symmetry_group(self, tmp_path):
        text = "[surface]\nrefinement = 0\nsymmetry_order = 3\n[solver]\nsymmetry_order = 3\n"
        orchestrator = make_orchestrator(tmp_path, text)
        orchestrator.build_data()
        assert orchestrator.group.order == 3

    def test_zero_start_not_admissible(self, tmp_path):
        orchestrator = make_orchestrator(tmp_path, DISC + "[curvature]\nK = constant:-1.0\n")
        with pytest.raises(PreconditionError, match="seed_kind"):
            orchestrator.initial_field(4.0 * math.pi)

    def test_configured_seed(self, tmp_path):
        text = DISC + "[solver]\nseed_kind = boundary_layer\n"
        orchestrator = make_orchestrator(tmp_path, text)
        u = orchestrator.initial_field(1.0)
        assert orchestrator.mesh.mean(u) == pytest.approx(0.0, abs=1e-12)

    def test_solver_options(self, tmp_path):
        orchestrator = make_orchestrator(tmp_path, DISC + "[solver]\ntol_grad = 1e-5\nmax_iter = 7\n")
        options = orchestrator.solver_options()
        assert options.tol_grad == 1e-5
        assert options.max_iter == 7

    def test_info(self, tmp_path, capsys):
        """Test the printed summary and the gamma table."""
        orchestrator = make_orchestrator(tmp_path, DISC + "[singularities]\ninterior = 0.0:0.0:-0.5\n")
        result = orchestrator.info()
        out = capsys.readouterr().out
        assert "classification=subcritical chi=0.5 tau=1.0" in out
        assert "hypotheses=chi>0:subcritical" in out
        assert "[surface]" in out
        values = [float(row["value"]) for row in read_rows(tmp_path / "gamma.csv")]
        np.testing.assert_allclose(values, result["gamma"])
        assert values[:2] == [0.0, pytest.approx(4.0 * math.pi)]

    def test_solve_constant_curvature(self, tmp_path, capsys):
        """Test that u = 0 is reported as converged with a closed Gauss-Bonnet balance."""
        orchestrator = make_orchestrator(tmp_path)
        report, solve = orchestrator.solve()
        assert solve.converged
        assert report.gauss_bonnet_residual == pytest.approx(0.0, abs=1e-10)
        assert report.morse_mean_field is not None
        assert report.morse_direct.index == report.morse_mean_field.index + 1
        written = read_report(str(tmp_path / "report.json"))
        assert written["solve"]["status"] == "converged"
        assert "status=converged" in capsys.readouterr().out

    @patch('scenario_orchestrator.solve_perturbed')
    def test_solve_runs_perturbed(self, mock_perturbed, tmp_path):
        def solved(data, mesh, lam, mu_list, *args):
            state = SimpleNamespace(u=np.zeros(mesh.n_vertices))
            return [SimpleNamespace(mu=mu, status="converged", energy=1.0, gradient_norm=0.0, state=state)
                    for mu in mu_list]

        mock_perturbed.side_effect = solved
        orchestrator = make_orchestrator(tmp_path, DISC + "[run]\nmu_list = 1.05,0.9\n")
        with patch.object(orchestrator, "perturbed", wraps=orchestrator.perturbed) as perturbed:
            orchestrator.solve()
        perturbed.assert_called_once()
        assert mock_perturbed.call_args.args[3] == [0.9, 1.05]

    def test_sweep_needs_grid(self, tmp_path):
        with pytest.raises(ConfigError, match="lambda_grid"):
            make_orchestrator(tmp_path).sweep()

    def test_bubble_center_defaults_to_boundary(self, tmp_path):
        orchestrator = make_orchestrator(tmp_path)
        sigma, on_boundary, alpha = orchestrator._bubble_center()
        assert on_boundary
        assert alpha == 0.0
        assert np.linalg.norm(sigma.points[0]) == pytest.approx(1.0)

    def test_bubble_center_at_cone(self, tmp_path):
        text = DISC + "[singularities]\ninterior = 0.0:0.0:-0.5\n[run]\nbubble_point = 0.0,0.0\n"
        sigma, on_boundary, alpha = make_orchestrator(tmp_path, text)._bubble_center()
        assert not on_boundary
        assert alpha == -0.5

    @patch('scenario_orchestrator.energy_slope', return_value=-4.0)
    @patch('scenario_orchestrator.bubble_slopes')
    def test_bubbles_targets(self, mock_slopes, mock_energy, tmp_path):
        """Test the interior targets at a cone of order -1/2 and lambda = 2 pi."""
        mock_slopes.return_value = BubbleSlopes(8.0 * math.pi, 1.0, float("nan"), (1.0, 2.0, 4.0), (8.0,))
        text = DISC + "[singularities]\ninterior = 0.0:0.0:-0.5\n[run]\nbubble_point = 0.0,0.0\n"
        rows = make_orchestrator(tmp_path, text).bubbles()
        targets = {row["quantity"]: row["target"] for row in rows}
        assert targets["dirichlet"] == pytest.approx(8.0 * math.pi)
        assert targets["interior_mass"] == pytest.approx(1.0)
        assert targets["test_function_energy"] == pytest.approx(0.5 * (16.0 * math.pi - 4.0 * math.pi))
        written = read_rows(tmp_path / "bubbles.csv")
        assert written[0]["used_lambdas"] == "1.0;2.0;4.0"
        assert written[2]["slope"] == "failed"

    def test_bubbles_on_coarse_mesh(self, tmp_path):
        orchestrator = make_orchestrator(tmp_path, DISC + "[run]\nbubble_lambdas = 100.0,300.0,1000.0\n")
        with pytest.raises(PreconditionError, match="too coarse"):
            orchestrator.bubbles()

    @patch('scenario_orchestrator.tm_probe')
    def test_probe(self, mock_probe, tmp_path, capsys):
        mock_probe.return_value = SimpleNamespace(which="boundary", constant=0.02, ratios=(0.5, 1.5), ratio=1.5,
                                                  eps_probe=0.1, lambdas=(2.0, 4.0, 8.0), passed=False)
        make_orchestrator(tmp_path).probe()
        rows = read_rows(tmp_path / "probe.csv")
        assert [row["passed"] for row in rows] == ["true", "false"]
        assert [row["lambda_bubble"] for row in rows] == ["4.0", "8.0"]
        assert "probe=boundary ratio=1.5 passed=false" in capsys.readouterr().out

    @patch('scenario_orchestrator.instability_witness')
    def test_limit_rows(self, mock_witness, tmp_path, capsys):
        """Test that every check is written and the witness expectations are applied."""
        mock_witness.return_value = SimpleNamespace(Q_value=-1.0, certified=True)
        rows = make_orchestrator(tmp_path).limit()
        checks = {row["check"]: row["passed"] for row in rows}
        assert checks["plane_residual"]
        assert checks["z0_interior_residual"]
        assert checks["plane_log_cap_R_Q"]
        assert not checks["plane_annulus_M_Q"]
        assert checks["halfplane_boundary_hz_Q"]
        assert mock_witness.call_count == 5
        assert "limit checks=12 failed=1" in capsys.readouterr().out
