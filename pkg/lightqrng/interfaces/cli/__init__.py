"""
命令行接口
"""

from .main import build_parser, main

__all__ = ["main", "build_parser"]
