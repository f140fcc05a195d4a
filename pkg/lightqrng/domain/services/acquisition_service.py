"""
采集服务：量化、会话仿真和直方图统计
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional

import numpy as np

from ..exceptions import ConfigError, DomainError, QuantizerMismatchError
from ..models.acquisition import (
    ConfigurationTag,
    SampleBlock,
    SampleHistogram,
    SessionConfig,
)
from ..models.base import require_finite
from ..models.noise_model import QuantizerSpec

logger = logging.getLogger(__name__)

# 每个子种子负责的样本数；与线程数无关，保证多线程结果与单线程一致
CHUNK_SIZE = 1 << 18


def quantize(x: float, q: QuantizerSpec) -> int:
    """
    量化单个取值

    Args:
        x: 取值（ADC单位）
        q: 量化器

    Returns:
        码值 clamp(floor((x + R)/Δx), 0, M-1)
    """
    x = require_finite("x", x)
    return int(quantize_array(np.array([x]), q)[0])


def quantize_array(values: np.ndarray, q: QuantizerSpec) -> np.ndarray:
    """向量化量化，超出量程的值饱和到端点码"""
    scaled = np.floor((np.asarray(values, dtype=np.float64) + q.range) / q.bin_width)
    return np.clip(scaled, 0, q.cardinality - 1).astype(np.int64)


def collapse_codes(codes: np.ndarray, factor: int) -> np.ndarray:
    """
    模拟有效分辨率不足的 ADC：每 factor 个真实码映射到同一个输出码

    Args:
        codes: 真实码值
        factor: 合并因子，1 表示理想 ADC

    Returns:
        输出码值（factor 的整数倍）
    """
    if factor < 1:
        raise DomainError(f"collapse factor must be >= 1, got {factor}")
    codes = np.asarray(codes, dtype=np.int64)
    if factor == 1:
        return codes
    return (codes // factor) * factor


def _chunk_codes(
    cfg: SessionConfig, std: float, index: int, start: int, stop: int
) -> np.ndarray:
    seed = np.random.SeedSequence(int(cfg.rng_seed), spawn_key=(index,))
    rng = np.random.Generator(np.random.PCG64(seed))
    samples = std * rng.standard_normal(stop - start)
    return quantize_array(samples, cfg.quantizer)


def _draw_codes(
    cfg: SessionConfig, variance: float, workers: Optional[int]
) -> np.ndarray:
    std = float(np.sqrt(variance))
    total = int(cfg.sample_count)
    bounds = [
        (i, start, min(start + CHUNK_SIZE, total))
        for i, start in enumerate(range(0, total, CHUNK_SIZE))
    ]
    n_workers = workers or min(4, os.cpu_count() or 1)
    if n_workers <= 1 or len(bounds) == 1:
        parts = [_chunk_codes(cfg, std, *b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as executor:
            parts = list(executor.map(lambda b: _chunk_codes(cfg, std, *b), bounds))
    codes = np.concatenate(parts)
    return collapse_codes(codes, cfg.adc_collapse)


def simulate_session(cfg: SessionConfig, workers: Optional[int] = None) -> SampleBlock:
    """
    仿真一次 LO_ON 或 LO_OFF 采集

    LO_ON 的方差为 g²(1+2n)+ν²_el，LO_OFF 只有 ν²_el。样本区间按固定块长切分，
    第 i 块使用种子 (rng_seed, i)，因此结果与线程数无关

    Args:
        cfg: 会话配置
        workers: 线程数，None 时自动选择

    Returns:
        样本块
    """
    if not isinstance(cfg, SessionConfig):
        raise ConfigError(f"expected SessionConfig, got {type(cfg).__name__}")
    if cfg.tag == ConfigurationTag.LO_SWEEP:
        raise ConfigError("LO_SWEEP sessions produce one block per gain; use simulate_sweep")

    variance = cfg.source_variance()
    codes = _draw_codes(cfg, variance, workers)
    logger.info(
        f"仿真 {cfg.tag.value}: 样本数={cfg.sample_count}, 方差={variance:.6g}, "
        f"种子={cfg.rng_seed}"
    )
    return SampleBlock(codes=codes, quantizer=cfg.quantizer, tag=cfg.tag)


def simulate_sweep(cfg: SessionConfig, workers: Optional[int] = None) -> List[SampleBlock]:
    """
    LO_SWEEP：每个增益值生成一个样本块

    第 k 个增益使用由主种子派生的第 k 个子种子

    Args:
        cfg: LO_SWEEP 会话配置
        workers: 线程数

    Returns:
        与 sweep_gains 顺序一致的样本块列表
    """
    if cfg.tag != ConfigurationTag.LO_SWEEP:
        raise ConfigError(f"simulate_sweep needs an LO_SWEEP config, got {cfg.tag.value}")

    children = np.random.SeedSequence(int(cfg.rng_seed)).generate_state(
        len(cfg.sweep_gains), dtype=np.uint64
    )
    blocks = []
    for gain, child_seed in zip(cfg.sweep_gains, children):
        sub_cfg = SessionConfig(
            tag=ConfigurationTag.LO_SWEEP,
            noise_model=cfg.noise_model,
            quantizer=cfg.quantizer,
            sample_count=cfg.sample_count,
            rng_seed=int(child_seed),
            sample_rate=cfg.sample_rate,
            sweep_gains=cfg.sweep_gains,
            adc_collapse=cfg.adc_collapse,
        )
        codes = _draw_codes(sub_cfg, cfg.source_variance(gain), workers)
        blocks.append(SampleBlock(codes=codes, quantizer=cfg.quantizer, tag=cfg.tag))
        logger.info(f"仿真 lo_sweep: 增益={gain}, 样本数={cfg.sample_count}")
    return blocks


def histogram(block: SampleBlock) -> SampleHistogram:
    """
    统计每个码的出现次数

    Args:
        block: 样本块

    Returns:
        直方图，概率向量为 counts/total
    """
    if len(block) == 0:
        raise DomainError("cannot build a histogram of an empty block")
    counts = np.bincount(block.codes, minlength=block.quantizer.cardinality)
    return SampleHistogram(counts=counts, quantizer=block.quantizer)


def merge_histograms(histograms: Iterable[SampleHistogram]) -> SampleHistogram:
    """合并同一量化器下的多个直方图（可并行归约）"""
    histograms = list(histograms)
    if not histograms:
        raise DomainError("nothing to merge")
    quantizer = histograms[0].quantizer
    for h in histograms[1:]:
        if h.quantizer != quantizer:
            raise QuantizerMismatchError("cannot merge histograms over different quantizers")
    counts = np.sum([h.counts for h in histograms], axis=0)
    return SampleHistogram(counts=counts, quantizer=quantizer)


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    """两个概率向量的总变差距离 ½Σ|p-q|"""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise DomainError("probability vectors must have the same length")
    return 0.5 * float(np.abs(p - q).sum())
