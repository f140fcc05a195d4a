"""
熵认证服务：香农熵分解、最小熵、条件最小熵、ADC 惩罚和可提取长度
"""

import logging
import math
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import DomainError, QuantizerMismatchError
from ..models.acquisition import SampleHistogram
from ..models.entropy import EffectiveWidth, EntropyParams, EntropyReport, WidthSource
from .special_functions import erf

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-9
CONSISTENCY_TOLERANCE = 1e-9
DEAD_CODE_SIGNIFICANCE = 1e-9


def _validated(p) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64).ravel()
    if p.size == 0:
        raise DomainError("probability vector is empty")
    if not np.all(np.isfinite(p)) or (p < 0).any():
        raise DomainError("probabilities must be finite and >= 0")
    total = p.sum()
    if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
        raise DomainError(f"probabilities sum to {total!r}, not 1")
    return p


def shannon_entropy(p) -> float:
    """
    香农熵 H = -Σ p log2 p，约定 0·log0 = 0

    Args:
        p: 归一化概率向量

    Returns:
        比特，范围 [0, log2 M]
    """
    p = _validated(p)
    nz = p[p > 0]
    value = float(-np.sum(nz * np.log2(nz)))
    return min(max(value, 0.0), math.log2(p.size))


def quantum_shannon(total: float, classical: Sequence[float]) -> Tuple[float, bool]:
    """
    量子部分香农熵 H_q = H_total - Σ H_c(i)

    Args:
        total: 总香农熵
        classical: 各经典噪声分量的香农熵

    Returns:
        (H_q, 是否发生了截断)；H_q 截断到 ≥ 0
    """
    if total < 0 or any(c < 0 for c in classical):
        raise DomainError("entropies must be >= 0")
    value = total - float(sum(classical))
    if value < 0:
        logger.warning(f"量子香农熵为负 ({value:.6f})，截断为 0")
        return 0.0, True
    return value, False


def min_entropy(p) -> float:
    """最小熵 -log2 max_j p_j"""
    p = _validated(p)
    return float(-math.log2(p.max())) + 0.0


def max_entropy_conjugate(p) -> float:
    """
    共轭正交分量的最大熵 2·log2 Σ√p_k

    Args:
        p: 归一化概率向量

    Returns:
        比特；均匀分布为 log2 M，δ 分布为 0
    """
    p = _validated(p)
    return max(2.0 * math.log2(float(np.sqrt(p).sum())), 0.0)


def conditional_min_entropy(
    n: float, bin_width: float, effective_width: EffectiveWidth
) -> float:
    """
    量子边信息下的条件最小熵闭式下界

    H_min(X|E) = -log2[(√n + √(n+1))²] - log2[erf(Δx / 2g′)]

    Args:
        n: 平均光子数
        bin_width: 区间宽度 Δx
        effective_width: 有效宽度 g′

    Returns:
        比特；n 较大时可能为负，由调用方决定是否可用
    """
    if n < 0:
        raise DomainError(f"mean photon number must be >= 0, got {n}")
    if bin_width <= 0:
        raise DomainError(f"bin width must be > 0, got {bin_width}")
    if isinstance(effective_width, (int, float)):
        effective_width = EffectiveWidth(float(effective_width))
    thermal = -2.0 * math.log2(math.sqrt(n) + math.sqrt(n + 1.0))
    resolution = -math.log2(erf(bin_width / (2.0 * effective_width.value)))
    return thermal + resolution + 0.0


def adc_penalty(sup_jf: int) -> float:
    """ADC 码合并惩罚 log2 sup|J_f|"""
    if isinstance(sup_jf, bool) or int(sup_jf) != sup_jf:
        raise DomainError(f"sup|J_f| must be an integer, got {sup_jf!r}")
    if sup_jf < 1:
        raise DomainError(f"sup|J_f| must be >= 1, got {sup_jf}")
    return math.log2(int(sup_jf))


def code_collapse_cardinality(
    mapping: Optional[Mapping[int, int]] = None,
    histogram: Optional[SampleHistogram] = None,
    significance: float = DEAD_CODE_SIGNIFICANCE,
) -> int:
    """
    sup|J_f|：映射到同一输出码的真实码的最大个数

    显式映射时取最大原像。给出直方图时，相邻两个出现过的码之间的空码段视为死码，
    死码并入相邻的活码，估计值为最长死码段长度 + 1。空码段两侧计数太少时
    （Poisson 下整段为零的概率 exp(-段长·两侧较小计数) 不低于 significance）
    无法和统计涨落区分，不计入。

    Args:
        mapping: 真实码 -> 输出码
        histogram: 实测直方图
        significance: 判定死码段的零计数概率上限

    Returns:
        sup|J_f| ≥ 1
    """
    if mapping is not None:
        if not mapping:
            raise DomainError("code map is empty")
        sizes: Dict[int, int] = {}
        for output in mapping.values():
            sizes[output] = sizes.get(output, 0) + 1
        return max(sizes.values())
    if histogram is not None:
        if not 0 < significance < 1:
            raise DomainError(f"significance must be in (0, 1), got {significance}")
        counts = histogram.counts
        observed = np.flatnonzero(counts)
        if observed.size < 2:
            return 1
        gaps = np.diff(observed) - 1
        flank = np.minimum(counts[observed[:-1]], counts[observed[1:]])
        dead = (gaps > 0) & (gaps * flank >= -math.log(significance))
        if not dead.any():
            return 1
        return int(gaps[dead].max()) + 1
    raise DomainError("need either a code map or a histogram")


def secure_rate_single_shot(h_min_cond: float, epsilon: float) -> float:
    """单次估计的安全随机数率 H_min(Q|E) - 2·log2(1/ε)"""
    if not 0 < epsilon <= 1:
        raise DomainError(f"epsilon must be in (0, 1], got {epsilon}")
    return h_min_cond - 2.0 * math.log2(1.0 / epsilon)


def hash_penalty(epsilon_hash: float) -> float:
    """剩余哈希引理的代价 log2(1 / (2·ε_hash²))"""
    if not 0 < epsilon_hash < 1:
        raise DomainError(f"epsilon_hash must be in (0, 1), got {epsilon_hash}")
    return -1.0 - 2.0 * math.log2(epsilon_hash)


def extractable_length(l: int, h_min_cond: float, epsilon_hash: float) -> int:
    """
    可提取长度 k = floor(l·H_min(X|E) - log2(1/(2ε_hash²)))，截断到 ≥ 0

    Args:
        l: 样本数
        h_min_cond: 每个样本的条件最小熵（比特）
        epsilon_hash: 哈希安全参数

    Returns:
        比特数
    """
    if l <= 0:
        raise DomainError(f"sample count must be > 0, got {l}")
    if h_min_cond < 0:
        raise DomainError(f"conditional min-entropy must be >= 0, got {h_min_cond}")
    value = math.floor(l * h_min_cond - hash_penalty(epsilon_hash))
    return max(int(value), 0)


def min_entropy_curve(
    n_values: Iterable[float], bin_width: float, effective_width: EffectiveWidth
) -> List[Tuple[float, float]]:
    """条件最小熵随平均光子数的变化"""
    return [
        (float(n), conditional_min_entropy(float(n), bin_width, effective_width))
        for n in n_values
    ]


def adc_penalty_curve(cardinalities: Iterable[int]) -> List[Tuple[int, float]]:
    """ADC 惩罚随合并基数的变化"""
    return [(int(c), adc_penalty(int(c))) for c in cardinalities]


def resolve_effective_width(
    params: EntropyParams, lo_on: SampleHistogram, lo_off: SampleHistogram
) -> Optional[EffectiveWidth]:
    """
    确定 g′：显式覆盖 > 模型 g·√(1+2n) > 直方图 √(Var_on − Var_off)

    Returns:
        有效宽度；直方图方差差不为正时返回 None
    """
    if params.effective_width is not None:
        return EffectiveWidth(params.effective_width, WidthSource.OVERRIDE)
    if params.gain is not None:
        return EffectiveWidth.from_model(params.gain, params.mean_photon_number)
    excess = lo_on.variance() - lo_off.variance()
    if excess <= 0:
        return None
    return EffectiveWidth(math.sqrt(excess), WidthSource.HISTOGRAM)


def certify(
    lo_on: SampleHistogram, lo_off: SampleHistogram, params: EntropyParams
) -> EntropyReport:
    """
    由 LO_ON 和 LO_OFF 直方图计算完整的熵报告

    Args:
        lo_on: 本振打开时的直方图（总噪声）
        lo_off: 本振关闭时的直方图（电子噪声）
        params: 认证参数

    Returns:
        熵报告
    """
    if lo_on.quantizer != lo_off.quantizer:
        raise QuantizerMismatchError(
            f"LO_ON quantizer {lo_on.quantizer.to_dict()} differs from "
            f"LO_OFF quantizer {lo_off.quantizer.to_dict()}"
        )
    quantizer = lo_on.quantizer
    warnings: List[str] = []

    p_on = lo_on.probabilities
    p_off = lo_off.probabilities
    h_total = shannon_entropy(p_on)
    h_c2 = shannon_entropy(p_off)
    h_c1 = params.imbalance_entropy
    h_q, clamped = quantum_shannon(h_total, [h_c1, h_c2])
    if clamped:
        warnings.append("shannon_quantum clamped to 0")

    hmin_total = min_entropy(p_on)
    hmin_c2 = min_entropy(p_off)
    h_max = max_entropy_conjugate(p_on)

    if params.sup_jf is not None:
        sup_jf = int(params.sup_jf)
    else:
        sup_jf = code_collapse_cardinality(histogram=lo_on)
        if sup_jf > 1:
            warnings.append(
                f"sup|J_f| estimated as {sup_jf} from dead LO_ON codes; "
                "set entropy.sup_jf to pin the ADC penalty"
            )
    penalty = adc_penalty(sup_jf)

    width = resolve_effective_width(params, lo_on, lo_off)
    if width is None:
        warnings.append("no quantum excess variance; conditional min-entropy set to 0")
        h_ideal = 0.0
        width_value, width_source = 0.0, WidthSource.HISTOGRAM
    else:
        h_ideal = conditional_min_entropy(
            params.mean_photon_number, quantizer.bin_width, width
        )
        width_value, width_source = width.value, width.source
    h_final = h_ideal - penalty

    if h_final > hmin_total + CONSISTENCY_TOLERANCE:
        warnings.append(
            "conditional min-entropy exceeds the unconditional min-entropy; "
            "check the effective width"
        )
    rate = secure_rate_single_shot(h_final, params.epsilon)
    if rate < 0:
        warnings.append("single-shot secure rate is negative; usable rate is 0")
    usable_final = max(h_final, 0.0)

    l = lo_on.total
    if h_q <= 0:
        k = 0
        warnings.append("no quantum entropy surplus; nothing certified")
    else:
        k = extractable_length(l, usable_final, params.epsilon_hash)
        if k == 0:
            warnings.append("extractable length is 0")

    for message in warnings:
        logger.warning(f"认证: {message}")

    report = EntropyReport(
        shannon_total=h_total,
        shannon_classical={"c1": h_c1, "c2": h_c2},
        shannon_quantum=h_q,
        quantum_clamped=clamped,
        min_entropy_unconditional=hmin_total,
        min_entropy_classical=hmin_c2,
        min_entropy_quantum=hmin_total - hmin_c2,
        max_entropy_conjugate=h_max,
        conditional_min_entropy_ideal=h_ideal,
        adc_penalty=penalty,
        conditional_min_entropy_final=h_final,
        secure_rate_single_shot=rate,
        usable_secure_rate=max(rate, 0.0),
        extractable_length=k,
        sample_count=l,
        epsilon=params.epsilon,
        epsilon_hash=params.epsilon_hash,
        mean_photon_number=params.mean_photon_number,
        bin_width=quantizer.bin_width,
        effective_width=width_value,
        effective_width_source=width_source,
        cardinality=quantizer.cardinality,
        sup_jf=sup_jf,
        warnings=tuple(warnings),
    )
    logger.info(
        f"认证完成: H_total={h_total:.4f}, H_c2={h_c2:.4f}, H_q={h_q:.4f}, "
        f"H_min(X|E)={h_final:.4f}, k={k}"
    )
    return report
