#!/usr/bin/env python
"""
Unit tests for csv_exporter.py module.
Tests the CSVExporter class, value formatting and the header comment.
"""

import math
from unittest.mock import mock_open, patch

import numpy as np
import pytest

from errors import OutputError
from exporters import CSVExporter, format_value, header_comment


class TestFormatValue:
    """Test class for format_value"""

    @pytest.mark.parametrize("value, expected", [
        (0.1, "0.1"),
        (1.0 / 3.0, "0.3333333333333333"),
        (np.float64(2.5), "2.5"),
        (np.int64(7), "7"),
        (float("nan"), "failed"),
        (-math.inf, "failed"),
        (True, "true"),
        (None, ""),
        ("converged", "converged"),
    ])
    def test_format(self, value, expected):
        assert format_value(value) == expected

    def test_round_trip_text(self):
        """Test that floats are written with enough digits to be read back exactly."""
        value = math.pi * 1e-7
        assert float(format_value(value)) == value

    def test_header_comment(self):
        assert header_comment("abc") == "# liouville-lab 0.1.0 config=abc"


class TestCSVExporter:
    """Test class for CSVExporter"""

    @pytest.fixture
    def csv_exporter(self, tmp_path):
        """Create CSVExporter instance writing into a temporary directory"""
        return CSVExporter(output_dir=str(tmp_path))

    def test_init_default_output_dir(self):
        exporter = CSVExporter()
        assert exporter.output_dir == "."
        assert exporter.csv_files == []

    def test_write_csv_file_success(self, csv_exporter, tmp_path):
        """Test the header comment, the column header and formatted rows"""
        rows = [{"check": "plane_residual", "value": 1.5e-11, "threshold": 1e-8, "passed": True},
                {"check": "plane_mass", "value": float("nan"), "threshold": 1e-3, "passed": False}]
        headers = ["check", "value", "threshold", "passed"]

        result = csv_exporter.write_csv_file("limit.csv", headers, rows, "hash")

        assert result is True
        lines = (tmp_path / "limit.csv").read_text().splitlines()
        assert lines == ["# liouville-lab 0.1.0 config=hash",
                         "check,value,threshold,passed",
                         "plane_residual,1.5e-11,1e-08,true",
                         "plane_mass,failed,0.001,false"]
        assert str(tmp_path / "limit.csv") in csv_exporter.csv_files

    def test_missing_keys_are_blank(self, csv_exporter, tmp_path):
        csv_exporter.write_csv_file("gamma.csv", ["value", "note"], [{"value": 0.0}], "h")
        assert (tmp_path / "gamma.csv").read_text().splitlines()[-1] == "0.0,"

    def test_creates_output_dir(self, tmp_path):
        exporter = CSVExporter(output_dir=str(tmp_path / "nested" / "out"))
        assert exporter.write_csv_file("gamma.csv", ["value"], [], "h") is True
        assert (tmp_path / "nested" / "out" / "gamma.csv").exists()

    @patch('os.makedirs')
    @patch('builtins.open', side_effect=OSError("Permission denied"))
    def test_write_csv_file_failure(self, mock_file, mock_makedirs, capsys):
        """Test that a failed write raises OutputError and prints nothing"""
        exporter = CSVExporter(output_dir="/tmp/test")

        with pytest.raises(OutputError, match="/tmp/test/sweep.csv: Permission denied") as info:
            exporter.write_csv_file("sweep.csv", ["lambda"], [{"lambda": 1.0}], "h")

        assert info.value.exit_code == 5
        assert capsys.readouterr().out == ""
        assert exporter.csv_files == []

    @patch('os.makedirs')
    @patch('builtins.open', new_callable=mock_open)
    def test_write_opens_in_output_dir(self, mock_file, mock_makedirs):
        exporter = CSVExporter(output_dir="/tmp/test")
        exporter.write_csv_file("probe.csv", ["probe"], [], "h")
        mock_file.assert_called_once_with("/tmp/test/probe.csv", "w", newline="")
        mock_makedirs.assert_called_once_with("/tmp/test", exist_ok=True)

    def test_get_default_filenames(self, csv_exporter):
        filenames = csv_exporter.get_default_filenames()
        assert set(filenames) == set(csv_exporter.get_csv_headers())
        assert filenames["sweep"] == "sweep.csv"

    def test_get_csv_headers(self, csv_exporter):
        headers = csv_exporter.get_csv_headers()
        assert headers["limit"] == ["check", "value", "threshold", "passed"]
        assert headers["sweep"][:2] == ["lambda", "status"]

    def test_export_tables(self, csv_exporter, tmp_path, capsys):
        """Test exporting several tables at once"""
        tables = {"gamma": [{"value": 0.0}, {"value": 4.0 * math.pi}],
                  "perturbed": [{"mu": 0.9, "status": "converged"}]}

        created = csv_exporter.export_tables(tables, "h")

        assert created == [str(tmp_path / "gamma.csv"), str(tmp_path / "perturbed.csv")]
        captured = capsys.readouterr()
        assert "Exported 2 rows to gamma.csv" in captured.out
        assert "Exported 1 rows to perturbed.csv" in captured.out
