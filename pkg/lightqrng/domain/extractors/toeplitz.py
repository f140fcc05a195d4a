"""
Toeplitz 矩阵哈希：GF(2) 上的两两通用哈希族
"""

import logging

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.signal import fftconvolve

from ..exceptions import DomainError
from ..models.extraction import BitBlock, ToeplitzSpec

logger = logging.getLogger(__name__)

# n_in·m_out 不超过该值时用整数滑窗乘法，否则用 FFT 卷积
DIRECT_LIMIT = 1 << 12
DENSE_LIMIT = 1 << 20


class ToeplitzOperator:
    """
    隐式 Toeplitz 算子

    T[i, j] = seed[i - j + n_in - 1]，因此 (T·x)_i 是 seed 与 x 的全卷积在
    下标 i + n_in - 1 处的值，不需要构造稠密矩阵。构造后不可变，可在线程间共享
    """

    def __init__(self, spec: ToeplitzSpec):
        self._spec = spec
        self._seed = spec.seed.astype(np.int64)
        self._seed_f = spec.seed.astype(np.float64)

    @property
    def spec(self) -> ToeplitzSpec:
        return self._spec

    @property
    def input_len(self) -> int:
        return self._spec.input_len

    @property
    def output_len(self) -> int:
        return self._spec.output_len

    def entry(self, i: int, j: int) -> int:
        """矩阵元素 T[i, j]"""
        if not (0 <= i < self.output_len and 0 <= j < self.input_len):
            raise DomainError(f"entry ({i}, {j}) outside {self.output_len}x{self.input_len}")
        return int(self._spec.seed[i - j + self.input_len - 1])

    def to_dense(self) -> np.ndarray:
        """稠密矩阵，仅用于小规格的校验"""
        if self.input_len * self.output_len > DENSE_LIMIT:
            raise DomainError("refusing to materialize a large Toeplitz matrix")
        i = np.arange(self.output_len)[:, None]
        j = np.arange(self.input_len)[None, :]
        return self._spec.seed[i - j + self.input_len - 1].astype(np.uint8)

    def apply_bits(self, blocks: np.ndarray) -> np.ndarray:
        """
        批量计算 T·x (mod 2)

        Args:
            blocks: 形状 (B, n_in) 或 (n_in,) 的 0/1 数组

        Returns:
            形状 (B, m_out) 或 (m_out,) 的 0/1 数组
        """
        x = np.asarray(blocks, dtype=np.uint8)
        single = x.ndim == 1
        if single:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self.input_len:
            raise DomainError(
                f"input blocks must have {self.input_len} bits, got shape {x.shape}"
            )
        if x.shape[0] == 0:
            out = np.zeros((0, self.output_len), dtype=np.uint8)
        elif self.input_len * self.output_len <= DIRECT_LIMIT:
            out = self._apply_direct(x)
        else:
            out = self._apply_fft(x)
        return out[0] if single else out

    def _apply_direct(self, x: np.ndarray) -> np.ndarray:
        # 第 i 行等于 seed[i : i+n_in] 的逆序
        windows = sliding_window_view(self._seed, self.input_len)[: self.output_len]
        acc = x[:, ::-1].astype(np.int64) @ windows.T
        return (acc & 1).astype(np.uint8)

    def _apply_fft(self, x: np.ndarray) -> np.ndarray:
        full = fftconvolve(x.astype(np.float64), self._seed_f[None, :], axes=1)
        start = self.input_len - 1
        acc = np.rint(full[:, start : start + self.output_len]).astype(np.int64)
        return (acc & 1).astype(np.uint8)

    def extract_block(self, block: BitBlock) -> BitBlock:
        """
        对一个 n_in 比特的输入块做哈希

        Args:
            block: 输入比特块

        Returns:
            m_out 比特的输出块
        """
        if block.length != self.input_len:
            raise DomainError(
                f"input block must have {self.input_len} bits, got {block.length}"
            )
        return BitBlock.from_bits(self.apply_bits(block.to_bits()))


def build_matrix(spec: ToeplitzSpec) -> ToeplitzOperator:
    """由规格构造隐式 Toeplitz 算子"""
    return ToeplitzOperator(spec)


def extract_block(op: ToeplitzOperator, block: BitBlock) -> BitBlock:
    """T·input over GF(2)"""
    return op.extract_block(block)
