#!/usr/bin/env python
"""
Module for writing scenario reports as JSON.
"""
import json
import logging
import math
import os

import numpy as np

from errors import OutputError
from exporters.csv_exporter import FAILED, header_comment

logger = logging.getLogger(__name__)


def _plain(value):
    """JSON-ready copy with non-finite floats replaced by the failure marker."""
    if isinstance(value, dict):
        return {str(key): _plain(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return FAILED
    return value


class ReportExporter:
    """
    Writes one structured report per scenario.
    """

    def __init__(self, output_dir="."):
        self.output_dir = output_dir

    def write_report(self, report, config_hash, filename="report.json"):
        """
        Write a report preceded by the header comment.

        Args:
            report: ScenarioReport or a plain dictionary
            config_hash (str): sha256 of the scenario configuration

        Returns:
            str: path of the written file

        Raises:
            OutputError: when the file cannot be written
        """
        payload = report.to_dict() if hasattr(report, "to_dict") else report
        path = os.path.join(self.output_dir, filename)
        try:
            os.makedirs(self.output_dir, exist_ok=True)
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(header_comment(config_hash) + "\n")
                json.dump(_plain(payload), handle, indent=2, sort_keys=True, allow_nan=False)
                handle.write("\n")
        except OSError as e:
            raise OutputError(f"cannot write report {path}: {e}") from e
        logger.debug("wrote report %s", path)
        print(f"Report written to {path}")
        return path


def read_report(path):
    """Load a report written by ReportExporter, skipping the header comment."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.readlines()
    body = "".join(line for line in lines if not line.startswith("#"))
    return json.loads(body)
