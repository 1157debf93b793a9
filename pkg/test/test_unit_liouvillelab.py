#!/usr/bin/env python
"""
Unit tests for the liouvillelab.py command-line front end.
"""
from types import SimpleNamespace
from unittest.mock import Mock, patch

import pytest

import liouvillelab
from errors import ConfigError, PreconditionError


class TestLiouvilleLab:
    """Test cases for the liouville-lab command."""

    def run_main(self, argv):
        with pytest.raises(SystemExit) as e:
            liouvillelab.main(argv)
        return e.value.code

    def test_argument_parser_default_values(self):
        """Test argument parser default values."""
        args = liouvillelab.build_parser().parse_args(["info", "--config", "scenario.ini"])
        assert args.subcommand == "info"
        assert args.config == "scenario.ini"
        assert args.out is None
        assert args.seed is None
        assert args.threads == 1
        assert not args.verbose
        assert not args.quiet

    def test_argument_parser_rejects_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit) as e:
            liouvillelab.build_parser().parse_args(["draw", "--config", "scenario.ini"])
        assert e.value.code == 2

    def test_verbose_and_quiet_are_exclusive(self):
        with pytest.raises(SystemExit):
            liouvillelab.build_parser().parse_args(["info", "--config", "s.ini", "--verbose", "--quiet"])

    def test_python_version_check(self, capsys):
        """Test that old interpreters are rejected before anything runs."""
        with patch('sys.version_info', (3, 9, 0)):
            assert self.run_main(["info", "--config", "s.ini"]) == 1
        assert "Python 3.10 or higher is required" in capsys.readouterr().out

    @patch('liouvillelab.ScenarioOrchestrator')
    @patch('liouvillelab.parse_config')
    def test_main_success(self, mock_parse, mock_orchestrator_class):
        """Test a subcommand dispatched to the orchestrator."""
        mock_orchestrator = Mock()
        mock_orchestrator_class.return_value = mock_orchestrator

        assert self.run_main(["limit", "--config", "s.ini", "--out", "results", "--seed", "3"]) == 0

        mock_parse.assert_called_once_with("s.ini")
        mock_orchestrator_class.assert_called_once_with(mock_parse.return_value, output_dir="results", threads=1,
                                                        seed=3)
        mock_orchestrator.limit.assert_called_once()

    @patch('liouvillelab.ScenarioOrchestrator')
    @patch('liouvillelab.parse_config')
    def test_solve_not_converged(self, mock_parse, mock_orchestrator_class, capsys):
        """Test exit code 3 when the minimizer does not converge."""
        solve = SimpleNamespace(converged=False, status="iteration_cap")
        mock_orchestrator_class.return_value.solve.return_value = (Mock(), solve)

        assert self.run_main(["solve", "--config", "s.ini"]) == 3
        assert "Error: solve did not converge (iteration_cap)" in capsys.readouterr().err

    @patch('liouvillelab.ScenarioOrchestrator')
    @patch('liouvillelab.parse_config')
    def test_solve_converged(self, mock_parse, mock_orchestrator_class):
        mock_orchestrator_class.return_value.solve.return_value = (Mock(), SimpleNamespace(converged=True))
        assert self.run_main(["solve", "--config", "s.ini"]) == 0

    @patch('liouvillelab.parse_config', side_effect=ConfigError("unknown key 'x' in [run]", 4))
    def test_config_error(self, mock_parse, capsys):
        assert self.run_main(["info", "--config", "s.ini"]) == 2
        assert "Error: line 4: unknown key 'x' in [run]" in capsys.readouterr().err

    @patch('liouvillelab.ScenarioOrchestrator')
    @patch('liouvillelab.parse_config')
    def test_precondition_error(self, mock_parse, mock_orchestrator_class, capsys):
        mock_orchestrator_class.return_value.bubbles.side_effect = PreconditionError("mesh too coarse")
        assert self.run_main(["bubbles", "--config", "s.ini"]) == 4
        assert "Error: mesh too coarse" in capsys.readouterr().err

    @patch('liouvillelab.ScenarioOrchestrator')
    @patch('liouvillelab.parse_config')
    def test_keyboard_interrupt(self, mock_parse, mock_orchestrator_class, capsys):
        mock_orchestrator_class.return_value.sweep.side_effect = KeyboardInterrupt()
        assert self.run_main(["sweep", "--config", "s.ini"]) == 1
        assert "Run interrupted by user" in capsys.readouterr().err

    @patch('liouvillelab.ScenarioOrchestrator')
    @patch('liouvillelab.parse_config')
    def test_generic_exception(self, mock_parse, mock_orchestrator_class, capsys):
        mock_orchestrator_class.return_value.probe.side_effect = RuntimeError("boom")
        assert self.run_main(["probe", "--config", "s.ini"]) == 1
        assert "Run failed with error: boom" in capsys.readouterr().err


class TestResolveThreads:
    """Test cases for the LIOUVILLE_THREADS override."""

    def test_flag_without_environment(self, monkeypatch):
        monkeypatch.delenv("LIOUVILLE_THREADS", raising=False)
        assert liouvillelab.resolve_threads(3) == 3
        assert liouvillelab.resolve_threads(0) == 1

    def test_environment_overrides_flag(self, monkeypatch):
        monkeypatch.setenv("LIOUVILLE_THREADS", "6")
        assert liouvillelab.resolve_threads(2) == 6

    @pytest.mark.parametrize("value", ["many", "0", "-2"])
    def test_invalid_environment_is_ignored(self, monkeypatch, value):
        monkeypatch.setenv("LIOUVILLE_THREADS", value)
        assert liouvillelab.resolve_threads(2) == 2

    @patch('liouvillelab.ScenarioOrchestrator')
    @patch('liouvillelab.parse_config')
    def test_threads_reach_orchestrator(self, mock_parse, mock_orchestrator_class, monkeypatch):
        monkeypatch.setenv("LIOUVILLE_THREADS", "4")
        with pytest.raises(SystemExit):
            liouvillelab.main(["sweep", "--config", "s.ini", "--threads", "2"])
        assert mock_orchestrator_class.call_args.kwargs["threads"] == 4
