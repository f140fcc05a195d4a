"""
随机性提取器
"""

from .seeds import SeedSource, derived_seed, resolve_seed
from .toeplitz import ToeplitzOperator, build_matrix, extract_block

__all__ = [
    "ToeplitzOperator",
    "build_matrix",
    "extract_block",
    "SeedSource",
    "derived_seed",
    "resolve_seed",
]
