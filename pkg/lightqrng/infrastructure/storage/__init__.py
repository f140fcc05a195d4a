"""
文件存储：原始样本、提取比特和 JSON 报告
"""

from .atomic import atomic_write_bytes, atomic_write_text
from .bit_file import BitFileRepository, load_bits, store_bits
from .json_report_store import JsonReportStore, dumps
from .raw_sample_file import RawSampleFileRepository, load_raw, store_raw

__all__ = [
    "atomic_write_bytes",
    "atomic_write_text",
    "store_raw",
    "load_raw",
    "RawSampleFileRepository",
    "store_bits",
    "load_bits",
    "BitFileRepository",
    "JsonReportStore",
    "dumps",
]
