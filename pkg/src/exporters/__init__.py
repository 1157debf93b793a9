"""
Data exporters for liouville-lab.
"""
from .csv_exporter import CSVExporter, format_value, header_comment
from .report_exporter import ReportExporter, read_report

__all__ = ['CSVExporter', 'format_value', 'header_comment', 'ReportExporter', 'read_report']
