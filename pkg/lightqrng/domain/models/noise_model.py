"""
噪声模型值对象：增益/热态光子数/电子噪声、ADC量化器和高斯分布参数
"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from ..exceptions import DomainError
from .base import ValueObject, require_finite

# 原始文件以 u16 存储码值
MAX_ADC_BITS = 16


@dataclass(frozen=True, eq=False)
class NoiseModel(ValueObject):
    """
    零差测量噪声模型

    输出方差 = g²(1+2n) + ν²_el，其中电子噪声作为独立加性高斯噪声计入
    """

    gain: float  # 增益 g，无量纲，>0
    mean_photon_number: float = 0.0  # 热态平均光子数 n，0 为真空态
    electronic_variance: float = 0.0  # 电子噪声方差 ν²_el，ADC单位²

    def __post_init__(self):
        require_finite("gain", self.gain)
        require_finite("mean_photon_number", self.mean_photon_number)
        require_finite("electronic_variance", self.electronic_variance)
        if self.gain <= 0:
            raise DomainError(f"gain must be > 0, got {self.gain}")
        if self.mean_photon_number < 0:
            raise DomainError(
                f"mean_photon_number must be >= 0, got {self.mean_photon_number}"
            )
        if self.electronic_variance < 0:
            raise DomainError(
                f"electronic_variance must be >= 0, got {self.electronic_variance}"
            )

    @property
    def shot_noise_variance(self) -> float:
        """量子部分方差 g²(1+2n)"""
        return self.gain**2 * (1.0 + 2.0 * self.mean_photon_number)

    def output_variance(self) -> float:
        """总输出方差 g²(1+2n) + ν²_el"""
        return self.shot_noise_variance + self.electronic_variance


@dataclass(frozen=True, eq=False)
class QuantizerSpec(ValueObject):
    """
    ADC 量化器

    区间左闭右开，M = 2^b 个码覆盖 [-R, R)，码 j 对应 [-R + jΔx, -R + (j+1)Δx)
    """

    range: float  # 满量程半宽 R，ADC单位
    bits: int  # 位数 b

    def __post_init__(self):
        require_finite("range", self.range)
        if self.range <= 0:
            raise DomainError(f"range must be > 0, got {self.range}")
        if isinstance(self.bits, bool) or not isinstance(self.bits, (int, np.integer)):
            raise DomainError(f"bits must be an integer, got {self.bits!r}")
        if not 2 <= self.bits <= MAX_ADC_BITS:
            raise DomainError(
                f"bits must be in [2, {MAX_ADC_BITS}], got {self.bits}"
            )

    @property
    def cardinality(self) -> int:
        """码的个数 M = 2^b"""
        return 1 << int(self.bits)

    @property
    def bin_width(self) -> float:
        """区间宽度 Δx = 2R / M"""
        return 2.0 * self.range / self.cardinality

    @property
    def center_code(self) -> int:
        """x=0 所在的码"""
        return self.cardinality // 2

    def edges(self) -> np.ndarray:
        """M+1 个单调递增的区间边界，首尾为 -R 和 R"""
        return -self.range + self.bin_width * np.arange(self.cardinality + 1)

    def bin_centers(self) -> np.ndarray:
        """每个码的区间中心"""
        return -self.range + self.bin_width * (np.arange(self.cardinality) + 0.5)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "range": float(self.range),
            "bits": int(self.bits),
            "bin_width": self.bin_width,
            "cardinality": self.cardinality,
        }


@dataclass(frozen=True, eq=False)
class GaussianSpec(ValueObject):
    """高斯分布 G(x; μ, ν²)"""

    mean: float
    variance: float

    def __post_init__(self):
        require_finite("mean", self.mean)
        require_finite("variance", self.variance)
        if self.variance <= 0:
            raise DomainError(f"variance must be > 0, got {self.variance}")

    @property
    def std(self) -> float:
        return float(np.sqrt(self.variance))

    @classmethod
    def from_noise_model(cls, model: NoiseModel, mean: float = 0.0) -> "GaussianSpec":
        """由噪声模型的总输出方差构造零均值高斯分布"""
        return cls(mean=mean, variance=model.output_variance())
