#!/usr/bin/env python
"""
Module for writing scenario tables to CSV files.
"""
import csv
import logging
import math
import os
import threading

import numpy as np

from errors import OutputError

logger = logging.getLogger(__name__)

TOOL_NAME = "liouville-lab"
VERSION = "0.1.0"
FAILED = "failed"


def header_comment(config_hash):
    """First line of every output file."""
    return f"# {TOOL_NAME} {VERSION} config={config_hash}"


def format_value(value):
    """Shortest round-trip text for floats (at most 17 significant digits); 'failed' for non-finite."""
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else FAILED
    return str(value)


class CSVExporter:
    """
    Class to handle CSV file creation for sweeps, slope studies and limit checks.
    """

    def __init__(self, output_dir="."):
        """
        Initialize the CSV exporter.

        Args:
            output_dir (str): Directory to save CSV files
        """
        self.output_dir = output_dir
        self.csv_files = []
        self._lock = threading.Lock()

    def write_csv_file(self, filename, headers, rows, config_hash):
        """
        Write rows to a CSV file preceded by the header comment.

        Args:
            filename (str): Name of the output CSV file inside the output directory
            headers (list): List of column headers
            rows (list): List of dictionaries containing the data
            config_hash (str): sha256 of the scenario configuration

        Returns:
            bool: True on success

        Raises:
            OutputError: when the file cannot be written
        """
        path = os.path.join(self.output_dir, filename)
        try:
            with self._lock:
                os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
                with open(path, "w", newline="") as csvfile:
                    csvfile.write(header_comment(config_hash) + "\n")
                    writer = csv.DictWriter(csvfile, fieldnames=headers, lineterminator="\n")
                    writer.writeheader()
                    for row in rows:
                        writer.writerow({key: format_value(row.get(key)) for key in headers})
                self.csv_files.append(path)
        except OSError as e:
            raise OutputError(f"cannot write CSV file {path}: {e}") from e
        logger.debug("wrote %d rows to %s", len(rows), path)
        return True

    def get_default_filenames(self):
        """
        Get default filenames for all CSV exports.

        Returns:
            dict: Dictionary of table names to filenames
        """
        return {
            "sweep": "sweep.csv",
            "bubbles": "bubbles.csv",
            "probe": "probe.csv",
            "gamma": "gamma.csv",
            "limit": "limit.csv",
            "perturbed": "perturbed.csv",
        }

    def get_csv_headers(self):
        """
        Get predefined CSV headers for all tables.

        Returns:
            dict: Dictionary of table names to header lists
        """
        return {
            "sweep": ["lambda", "status", "energy", "gradient_norm", "pde_residual_interior",
                      "pde_residual_boundary", "C", "max_u", "gamma_distance", "captured_fraction",
                      "concentration_x", "concentration_y", "iterations"],
            "bubbles": ["quantity", "slope", "target", "used_lambdas", "excluded_lambdas"],
            "probe": ["probe", "lambda_bubble", "ratio", "constant", "passed"],
            "gamma": ["value"],
            "limit": ["check", "value", "threshold", "passed"],
            "perturbed": ["mu", "status", "energy", "gradient_norm", "dirichlet_energy"],
        }

    def export_tables(self, tables, config_hash):
        """
        Export every non-empty table.

        Args:
            tables (dict): table name to list of row dictionaries
            config_hash (str): sha256 of the scenario configuration

        Returns:
            list: List of created CSV file paths
        """
        filenames = self.get_default_filenames()
        headers = self.get_csv_headers()
        created_files = []
        for name, rows in tables.items():
            if self.write_csv_file(filenames[name], headers[name], rows, config_hash):
                print(f"Exported {len(rows)} rows to {filenames[name]}")
                created_files.append(os.path.join(self.output_dir, filenames[name]))
        return created_files
