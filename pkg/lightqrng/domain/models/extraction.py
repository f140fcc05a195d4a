"""
提取模型：Toeplitz 规格和打包比特块
"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from ..exceptions import ConfigError, DomainError
from .base import ValueObject

DEFAULT_INPUT_LEN = 900
DEFAULT_OUTPUT_LEN = 200


@dataclass(frozen=True, eq=False)
class BitBlock(ValueObject):
    """
    打包比特序列

    data 按高位在前打包，末尾填充位为0；length 为有效比特数
    """

    data: bytes
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise DomainError(f"bit length must be >= 0, got {self.length}")
        data = bytes(self.data)
        expected = (self.length + 7) // 8
        if len(data) != expected:
            raise DomainError(
                f"{self.length} bits need {expected} bytes, got {len(data)}"
            )
        pad = expected * 8 - self.length
        if pad and data[-1] & ((1 << pad) - 1):
            raise DomainError("trailing pad bits must be zero")
        object.__setattr__(self, "data", data)

    @classmethod
    def from_bits(cls, bits) -> "BitBlock":
        """由 0/1 序列构造"""
        array = np.asarray(bits, dtype=np.uint8).ravel()
        if array.size and array.max() > 1:
            raise DomainError("bits must be 0 or 1")
        return cls(data=np.packbits(array).tobytes(), length=int(array.size))

    @classmethod
    def empty(cls) -> "BitBlock":
        return cls(data=b"", length=0)

    def to_bits(self) -> np.ndarray:
        """解包为 uint8 的 0/1 数组"""
        raw = np.frombuffer(self.data, dtype=np.uint8)
        return np.unpackbits(raw, count=self.length)

    def to_hex(self) -> str:
        return self.data.hex()

    def __len__(self) -> int:
        return self.length

    def to_dict(self) -> Dict[str, Any]:
        return {"length": self.length, "bytes": len(self.data)}


@dataclass(frozen=True, eq=False)
class ToeplitzSpec(ValueObject):
    """
    Toeplitz 提取器规格

    m_out × n_in 矩阵，T[i, j] = seed[i - j + n_in - 1]，种子长度 n_in + m_out - 1
    """

    input_len: int
    output_len: int
    seed: np.ndarray

    def __post_init__(self):
        if self.input_len < 1 or self.output_len < 1:
            raise ConfigError("Toeplitz dimensions must be >= 1")
        if self.output_len > self.input_len:
            raise ConfigError(
                f"output_len {self.output_len} exceeds input_len {self.input_len}"
            )
        seed = np.array(self.seed, dtype=np.uint8, copy=True).ravel()
        if seed.size != self.seed_length:
            raise ConfigError(
                f"seed must have {self.seed_length} bits, got {seed.size}"
            )
        if seed.size and seed.max() > 1:
            raise ConfigError("seed must contain only 0/1 bits")
        seed.flags.writeable = False
        object.__setattr__(self, "seed", seed)

    @property
    def seed_length(self) -> int:
        return self.input_len + self.output_len - 1

    @property
    def ratio(self) -> float:
        """输出/输入比"""
        return self.output_len / self.input_len

    @classmethod
    def from_seed_bytes(
        cls, input_len: int, output_len: int, seed_bytes: bytes
    ) -> "ToeplitzSpec":
        """
        从字节串取前 n_in + m_out - 1 个比特（高位在前）作为种子

        Args:
            input_len: 输入比特数
            output_len: 输出比特数
            seed_bytes: 种子字节

        Returns:
            Toeplitz 规格
        """
        needed = input_len + output_len - 1
        bits = np.unpackbits(np.frombuffer(seed_bytes, dtype=np.uint8))
        if bits.size < needed:
            raise ConfigError(
                f"seed provides {bits.size} bits, {needed} required "
                f"({(needed + 7) // 8} bytes)"
            )
        return cls(input_len=input_len, output_len=output_len, seed=bits[:needed])

    def seed_hex(self) -> str:
        return np.packbits(self.seed).tobytes().hex()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input_len": self.input_len,
            "output_len": self.output_len,
            "seed_hex": self.seed_hex(),
        }
