"""
高斯/热态测量模型及其在 ADC 区间上的离散化
"""

import logging
import math
from typing import Sequence, Union

import numpy as np

from ..exceptions import DomainError
from ..models.base import require_finite
from ..models.noise_model import GaussianSpec, NoiseModel, QuantizerSpec
from .special_functions import erf, normal_cdf

logger = logging.getLogger(__name__)


def gaussian_pdf(x: float, spec: GaussianSpec) -> float:
    """
    高斯概率密度 G(x; μ, ν²)

    Args:
        x: 取值（ADC单位）
        spec: 高斯分布参数

    Returns:
        概率密度，非负
    """
    if not isinstance(spec, GaussianSpec):
        raise DomainError(f"expected GaussianSpec, got {type(spec).__name__}")
    x = require_finite("x", x)
    return math.exp(-((x - spec.mean) ** 2) / (2.0 * spec.variance)) / math.sqrt(
        2.0 * math.pi * spec.variance
    )


def output_variance(model: NoiseModel) -> float:
    """总输出方差 g²(1+2n) + ν²_el"""
    return model.output_variance()


def edge_probabilities(
    spec: GaussianSpec, edges: Union[Sequence[float], np.ndarray]
) -> np.ndarray:
    """
    任意单调边界上的区间概率

    首末区间吸收两侧尾部（饱和），因此结果长度为 len(edges)-1，且和为 1

    Args:
        spec: 高斯分布参数
        edges: 单调递增的边界

    Returns:
        每个区间的概率
    """
    edges = np.asarray(edges, dtype=np.float64)
    if edges.ndim != 1 or edges.size < 2:
        raise DomainError("need at least two edges")
    if np.any(np.diff(edges) <= 0):
        raise DomainError("edges must be strictly increasing")
    inner = normal_cdf(edges[1:-1], spec.mean, spec.std)
    cdf = np.concatenate(([0.0], np.atleast_1d(inner), [1.0]))
    return np.clip(np.diff(cdf), 0.0, None)


def bin_probabilities(spec: GaussianSpec, q: QuantizerSpec) -> np.ndarray:
    """
    离散化分布 p(j) = ∫_J p_X(x) dx

    低于 -R 的质量计入码 0，高于 R-Δx 的质量计入码 M-1

    Args:
        spec: 高斯分布参数
        q: 量化器

    Returns:
        长度为 M 的概率向量
    """
    return edge_probabilities(spec, q.edges())


def bin_mass(spec: GaussianSpec, low: float, high: float) -> float:
    """区间 [low, high) 上的概率质量"""
    if high <= low:
        raise DomainError("high must exceed low")
    s = spec.std * math.sqrt(2.0)
    return 0.5 * (erf((high - spec.mean) / s) - erf((low - spec.mean) / s))


def dequantize(code: int, q: QuantizerSpec) -> float:
    """码值对应的区间中心 -R + (code + 1/2)Δx"""
    if not 0 <= code < q.cardinality:
        raise DomainError(f"code {code} outside [0, {q.cardinality - 1}]")
    return -q.range + (code + 0.5) * q.bin_width


def discretized_entropy(spec: GaussianSpec, q: QuantizerSpec) -> float:
    """离散化高斯分布的香农熵（比特）"""
    p = bin_probabilities(spec, q)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def continuous_min_entropy(variance: float, bin_width: float) -> float:
    """
    细分箱近似的最小熵 ½·log2(2πν²) - log2(Δx)

    Args:
        variance: 方差 ν²
        bin_width: 区间宽度 Δx

    Returns:
        比特
    """
    if variance <= 0 or bin_width <= 0:
        raise DomainError("variance and bin width must be > 0")
    return 0.5 * math.log2(2.0 * math.pi * variance) - math.log2(bin_width)
