"""
频率类检验：单比特频率、块内频率、累积和
"""

import math
from typing import Sequence, Tuple

import numpy as np
from scipy.special import erfc, gammaincc, ndtr

from ..exceptions import DomainError
from .base_test import StatisticalTest


class MonobitFrequencyTest(StatisticalTest):
    """单比特频率检验：0 和 1 的比例是否接近 1/2"""

    test_id = "monobit_frequency"
    description = "Proportion of ones over the whole sequence"
    min_length = 2

    def compute(self, bits: np.ndarray) -> Tuple[float, Sequence[float]]:
        n = bits.size
        s = 2 * int(np.count_nonzero(bits)) - n
        s_obs = abs(s) / math.sqrt(n)
        return s_obs, (erfc(s_obs / math.sqrt(2.0)),)


class BlockFrequencyTest(StatisticalTest):
    """块内频率检验：每个 M 比特块中 1 的比例"""

    test_id = "block_frequency"
    description = "Proportion of ones within M-bit blocks"
    min_length = 8

    def __init__(self, enabled: bool = True, block_size: int = 128):
        self.block_size = block_size
        super().__init__(enabled)

    @property
    def params(self):
        return {"block_size": self.block_size}

    def effective_block_size(self, n: int) -> int:
        """输入不足一块时把块长缩小到 n/8"""
        if self.block_size < 1:
            raise DomainError(f"block_size must be >= 1, got {self.block_size}")
        if n < self.block_size:
            size = max(n // 8, 1)
            self.logger.info(f"输入 {n} 比特不足一块，块长调整为 {size}")
            return size
        return int(self.block_size)

    def compute(self, bits: np.ndarray) -> Tuple[float, Sequence[float]]:
        m = self.effective_block_size(bits.size)
        n_blocks = bits.size // m
        # 丢弃不完整的尾块
        proportions = bits[: n_blocks * m].reshape(n_blocks, m).mean(axis=1)
        chi2 = 4.0 * m * float(np.sum((proportions - 0.5) ** 2))
        return chi2, (gammaincc(n_blocks / 2.0, chi2 / 2.0),)


def _cusum_p_value(n: int, z: int) -> float:
    sqrt_n = math.sqrt(n)
    ratio = n / z
    # 与标准实现一致，求和上下限向零截断
    k1 = np.arange(int((-ratio + 1) / 4), int((ratio - 1) / 4) + 1)
    k2 = np.arange(int((-ratio - 3) / 4), int((ratio - 1) / 4) + 1)
    first = np.sum(ndtr((4 * k1 + 1) * z / sqrt_n) - ndtr((4 * k1 - 1) * z / sqrt_n))
    second = np.sum(ndtr((4 * k2 + 3) * z / sqrt_n) - ndtr((4 * k2 + 1) * z / sqrt_n))
    return float(1.0 - first + second)


class CumulativeSumsTest(StatisticalTest):
    """累积和检验：±1 随机游走的最大偏移，正向与反向各给一个 p 值"""

    test_id = "cumulative_sums"
    description = "Maximal excursion of the ±1 random walk, forward and backward"
    min_length = 2

    def compute(self, bits: np.ndarray) -> Tuple[float, Sequence[float]]:
        z_forward, z_backward = self.z_values(bits)
        n = bits.size
        return float(z_forward), (
            _cusum_p_value(n, z_forward),
            _cusum_p_value(n, z_backward),
        )

    @staticmethod
    def z_values(bits: np.ndarray) -> Tuple[int, int]:
        """正向和反向的最大偏移"""
        steps = 2 * np.asarray(bits, dtype=np.int64) - 1
        return (
            int(np.max(np.abs(np.cumsum(steps)))),
            int(np.max(np.abs(np.cumsum(steps[::-1])))),
        )


__all__ = [
    "MonobitFrequencyTest",
    "BlockFrequencyTest",
    "CumulativeSumsTest",
]
