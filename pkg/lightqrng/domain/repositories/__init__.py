"""
仓库模块，包含所有仓库接口
"""

from .bit_repository import BitRepository
from .report_repository import ReportRepository
from .sample_repository import SampleRepository

__all__ = [
    "SampleRepository",
    "BitRepository",
    "ReportRepository",
]
