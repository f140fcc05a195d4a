"""
lightqrng：基于平衡零差探测真空涨落的量子随机数后处理框架
"""

__version__ = "0.1.0"
