"""
采集模型：会话配置、样本块和样本直方图
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..exceptions import ConfigError, DomainError
from .base import ValueObject
from .noise_model import NoiseModel, QuantizerSpec

DEFAULT_SAMPLE_RATE = 500_000.0


class ConfigurationTag(Enum):
    """采集配置枚举"""

    LO_SWEEP = "lo_sweep"  # 改变本振功率，标定零差不平衡噪声 H(X)_c(1)
    LO_OFF = "lo_off"  # 本振关闭，电子噪声 H(X)_c(2)
    LO_ON = "lo_on"  # 本振打开，总噪声 H(X)_total

    @property
    def wire_code(self) -> int:
        """原始文件中的配置标签"""
        return _WIRE_CODES[self]

    @classmethod
    def from_wire_code(cls, code: int) -> "ConfigurationTag":
        for tag, value in _WIRE_CODES.items():
            if value == code:
                return tag
        raise ValueError(f"unknown configuration tag {code}")


_WIRE_CODES = {
    ConfigurationTag.LO_ON: 1,
    ConfigurationTag.LO_OFF: 2,
    ConfigurationTag.LO_SWEEP: 3,
}


@dataclass(frozen=True, eq=False)
class SessionConfig(ValueObject):
    """采集会话配置值对象"""

    tag: ConfigurationTag  # 采集配置
    noise_model: NoiseModel  # 噪声模型
    quantizer: QuantizerSpec  # ADC量化器
    sample_count: int  # 样本数 l
    rng_seed: int  # 仿真随机数种子（64位）
    sample_rate: float = DEFAULT_SAMPLE_RATE  # 采样率，Hz，仅作记录
    sweep_gains: Tuple[float, ...] = field(default_factory=tuple)  # LO_SWEEP 的增益列表
    adc_collapse: int = 1  # 码值合并因子，1 为理想ADC

    def __post_init__(self):
        if not isinstance(self.tag, ConfigurationTag):
            raise ConfigError(f"invalid configuration tag {self.tag!r}")
        if isinstance(self.sample_count, bool) or not isinstance(
            self.sample_count, (int, np.integer)
        ):
            raise ConfigError(f"sample_count must be an integer, got {self.sample_count!r}")
        if self.sample_count <= 0:
            raise ConfigError(f"sample_count must be > 0, got {self.sample_count}")
        if not isinstance(self.rng_seed, (int, np.integer)) or not (
            0 <= int(self.rng_seed) < 2**64
        ):
            raise ConfigError(f"rng_seed must be a 64-bit unsigned integer, got {self.rng_seed!r}")
        if self.sample_rate <= 0:
            raise ConfigError(f"sample_rate must be > 0, got {self.sample_rate}")
        if self.adc_collapse < 1:
            raise ConfigError(f"adc_collapse must be >= 1, got {self.adc_collapse}")
        object.__setattr__(self, "sweep_gains", tuple(float(g) for g in self.sweep_gains))
        if self.tag == ConfigurationTag.LO_SWEEP:
            if len(self.sweep_gains) < 2:
                raise ConfigError("LO_SWEEP requires at least 2 gain values")
            if any(g <= 0 for g in self.sweep_gains):
                raise ConfigError("LO_SWEEP gains must be > 0")

    def source_variance(self, gain: Optional[float] = None) -> float:
        """
        仿真源的方差

        LO_OFF 只包含电子噪声；LO_ON 和 LO_SWEEP 包含 g²(1+2n) + ν²_el

        Args:
            gain: LO_SWEEP 时使用的增益，默认为噪声模型的增益

        Returns:
            方差（ADC单位²）
        """
        model = self.noise_model
        if self.tag == ConfigurationTag.LO_OFF:
            return model.electronic_variance
        g = model.gain if gain is None else gain
        return g**2 * (1.0 + 2.0 * model.mean_photon_number) + model.electronic_variance

    @property
    def raw_bits(self) -> int:
        """原始比特数 l × b"""
        return int(self.sample_count) * int(self.quantizer.bits)

    @property
    def duration_seconds(self) -> float:
        """按采样率估算的采集时长"""
        return self.sample_count / self.sample_rate


@dataclass(frozen=True, eq=False)
class SampleBlock(ValueObject):
    """ADC 码值序列，保存在经典寄存器中"""

    codes: np.ndarray  # 码值，范围 [0, M-1]
    quantizer: QuantizerSpec
    tag: ConfigurationTag

    def __post_init__(self):
        codes = np.array(self.codes, dtype=np.int64, copy=True).ravel()
        if codes.size and (codes.min() < 0 or codes.max() >= self.quantizer.cardinality):
            raise DomainError(
                f"codes must lie in [0, {self.quantizer.cardinality - 1}]"
            )
        codes = codes.astype(np.uint16)
        codes.flags.writeable = False
        object.__setattr__(self, "codes", codes)

    def __len__(self) -> int:
        return int(self.codes.size)

    def dequantized(self) -> np.ndarray:
        """码值对应的区间中心"""
        return self.quantizer.bin_centers()[self.codes]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tag": self.tag.value,
            "quantizer": self.quantizer.to_dict(),
            "sample_count": len(self),
        }


@dataclass(frozen=True, eq=False)
class SampleHistogram(ValueObject):
    """每个码的计数及其经验概率分布 p(q_k)"""

    counts: np.ndarray  # 长度 M
    quantizer: QuantizerSpec

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64, copy=True).ravel()
        if counts.size != self.quantizer.cardinality:
            raise DomainError(
                f"histogram needs {self.quantizer.cardinality} counts, got {counts.size}"
            )
        if (counts < 0).any():
            raise DomainError("histogram counts must be >= 0")
        if counts.sum() == 0:
            raise DomainError("histogram is empty")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def probabilities(self) -> np.ndarray:
        return self.counts / self.total

    def mean(self) -> float:
        """用区间中心估计的均值"""
        return float(np.dot(self.probabilities, self.quantizer.bin_centers()))

    def variance(self) -> float:
        """用区间中心估计的方差"""
        centers = self.quantizer.bin_centers()
        p = self.probabilities
        mu = np.dot(p, centers)
        return float(np.dot(p, (centers - mu) ** 2))

    def observed_codes(self) -> np.ndarray:
        """出现过的码"""
        return np.flatnonzero(self.counts)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "quantizer": self.quantizer.to_dict(),
            "total": self.total,
            "distinct_codes": int(self.observed_codes().size),
        }
