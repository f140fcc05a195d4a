"""
标定服务：按目标香农熵求方差，以及 LO_SWEEP 的散粒噪声线性度分析
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from ..exceptions import ConfigError, DomainError
from ..models.acquisition import SampleBlock
from ..models.noise_model import GaussianSpec, NoiseModel, QuantizerSpec
from .acquisition_service import histogram
from .entropy_service import min_entropy, shannon_entropy
from .gaussian_model import discretized_entropy

logger = logging.getLogger(__name__)


def _entropy_at_std(std: float, q: QuantizerSpec) -> float:
    return discretized_entropy(GaussianSpec(mean=0.0, variance=std * std), q)


def calibrate_variance(target_bits: float, q: QuantizerSpec, xtol: float = 1e-14) -> float:
    """
    求零均值高斯方差 ν²，使其离散化香农熵等于目标值

    Args:
        target_bits: 目标香农熵（比特）
        q: 量化器
        xtol: 标准差的求根容差

    Returns:
        方差 ν²
    """
    low_std = q.bin_width * 1e-3
    high_std = q.range / 2.0
    low, high = _entropy_at_std(low_std, q), _entropy_at_std(high_std, q)
    if not low < target_bits < high:
        raise ConfigError(
            f"target entropy {target_bits} bits is outside the reachable "
            f"range ({low:.4f}, {high:.4f}) for this quantizer"
        )
    std = brentq(
        lambda s: _entropy_at_std(s, q) - target_bits,
        low_std,
        high_std,
        xtol=xtol * q.bin_width,
        rtol=1e-13,
        maxiter=200,
    )
    return float(std * std)


def calibrate_noise_model(
    lo_on_bits: float,
    lo_off_bits: float,
    q: QuantizerSpec,
    mean_photon_number: float = 0.0,
) -> NoiseModel:
    """
    构造噪声模型，使 LO_OFF 通道（仅电子噪声）和 LO_ON 通道的离散化香农熵命中目标

    Args:
        lo_on_bits: LO_ON 目标香农熵
        lo_off_bits: LO_OFF 目标香农熵
        q: 量化器
        mean_photon_number: 平均光子数 n

    Returns:
        噪声模型，g² = (ν²_on - ν²_el) / (1+2n)
    """
    if lo_on_bits <= lo_off_bits:
        raise ConfigError("LO_ON target entropy must exceed the LO_OFF target")
    electronic = calibrate_variance(lo_off_bits, q)
    total = calibrate_variance(lo_on_bits, q)
    gain = math.sqrt((total - electronic) / (1.0 + 2.0 * mean_photon_number))
    logger.info(
        f"噪声标定: ν²_el={electronic:.6g}, ν²_on={total:.6g}, g={gain:.6g}"
    )
    return NoiseModel(
        gain=gain,
        mean_photon_number=mean_photon_number,
        electronic_variance=electronic,
    )


@dataclass
class SweepCharacterization:
    """LO_SWEEP 标定结果：方差与 g² 的线性拟合"""

    gains: List[float]
    variances: List[float]
    shannon: List[float]
    min_entropy: List[float]
    slope: float  # ≈ 1+2n
    intercept: float  # ≈ ν²_el
    residual_rms: float
    warnings: List[str] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        """转换为 DataFrame，每个增益一行"""
        return pd.DataFrame(
            {
                "gain": self.gains,
                "gain_squared": [g * g for g in self.gains],
                "variance": self.variances,
                "shannon": self.shannon,
                "min_entropy": self.min_entropy,
            }
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "gains": list(self.gains),
            "variances": list(self.variances),
            "shannon": list(self.shannon),
            "min_entropy": list(self.min_entropy),
            "slope": self.slope,
            "intercept": self.intercept,
            "residual_rms": self.residual_rms,
            "warnings": list(self.warnings),
        }


def characterize_sweep(
    blocks: Sequence[SampleBlock], gains: Sequence[float], linearity_tolerance: float = 0.05
) -> SweepCharacterization:
    """
    分析本振功率扫描：每个增益的方差和熵，并拟合 Var = a + b·g²

    散粒噪声受限时方差与 g² 成线性，截距为电子噪声方差；相对残差超过容差时给出告警

    Args:
        blocks: simulate_sweep 的输出
        gains: 对应的增益
        linearity_tolerance: 允许的相对残差

    Returns:
        扫描标定结果
    """
    if len(blocks) != len(gains) or len(blocks) < 2:
        raise DomainError("need at least two sweep blocks, one per gain")
    variances, shannons, min_entropies = [], [], []
    for block in blocks:
        h = histogram(block)
        variances.append(h.variance())
        shannons.append(shannon_entropy(h.probabilities))
        min_entropies.append(min_entropy(h.probabilities))

    g2 = np.asarray(gains, dtype=np.float64) ** 2
    var = np.asarray(variances)
    slope, intercept = np.polyfit(g2, var, 1)
    fitted = slope * g2 + intercept
    residual = float(np.sqrt(np.mean((var - fitted) ** 2)))
    warnings = []
    scale = float(np.max(np.abs(var))) or 1.0
    if residual / scale > linearity_tolerance:
        warnings.append(
            f"variance is not linear in g^2 (relative residual {residual / scale:.3g})"
        )
        logger.warning(f"扫描线性度不足: 相对残差 {residual / scale:.3g}")
    return SweepCharacterization(
        gains=[float(g) for g in gains],
        variances=[float(v) for v in variances],
        shannon=shannons,
        min_entropy=min_entropies,
        slope=float(slope),
        intercept=float(intercept),
        residual_rms=residual,
        warnings=warnings,
    )
