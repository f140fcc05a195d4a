"""
数据传输对象
"""

from .run_report import SCHEMA_VERSION, ReportDocument, RunReport, validate_report

__all__ = ["RunReport", "ReportDocument", "validate_report", "SCHEMA_VERSION"]
